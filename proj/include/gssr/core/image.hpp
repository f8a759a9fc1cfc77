#pragma once

#include "gssr/core/types.hpp"

#include <cassert>
#include <vector>

namespace gssr {

/// Dense row-major H x W x C raster. C is innermost so a pixel's channels are
/// contiguous.
template <class T>
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<T> data;

    Image() = default;
    Image(int w, int h, int c, T fill = T(0)) : width(w), height(h), channels(c), data(size_t(w) * h * c, fill) {}

    bool empty() const { return data.empty(); }
    size_t pixel_count() const { return size_t(width) * height; }
    size_t size() const { return data.size(); }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    T* at(int x, int y) {
        assert(in_bounds(x, y));
        return data.data() + (size_t(y) * width + x) * channels;
    }
    const T* at(int x, int y) const {
        assert(in_bounds(x, y));
        return data.data() + (size_t(y) * width + x) * channels;
    }

    T& operator()(int x, int y, int c = 0) { return at(x, y)[c]; }
    const T& operator()(int x, int y, int c = 0) const { return at(x, y)[c]; }

    void fill(T v) { std::fill(data.begin(), data.end(), v); }

    bool same_shape(const Image& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }

    template <class U>
    Image<U> cast() const {
        Image<U> out(width, height, channels);
        for (size_t i = 0; i < data.size(); ++i) out.data[i] = static_cast<U>(data[i]);
        return out;
    }
};

/// Bilinear sample of channel c at continuous position (x, y); pixel centers
/// sit at integer coordinates. Returns false when the 2x2 support leaves the
/// image.
template <class T>
bool bilinear_sample(const Image<T>& img, double x, double y, int c, double* value) {
    const int x0 = int(std::floor(x));
    const int y0 = int(std::floor(y));
    if (x0 < 0 || y0 < 0 || x0 + 1 >= img.width || y0 + 1 >= img.height) return false;
    const double fx = x - x0;
    const double fy = y - y0;
    const double v00 = img(x0, y0, c);
    const double v10 = img(x0 + 1, y0, c);
    const double v01 = img(x0, y0 + 1, c);
    const double v11 = img(x0 + 1, y0 + 1, c);
    *value = (1 - fy) * ((1 - fx) * v00 + fx * v10) + fy * ((1 - fx) * v01 + fx * v11);
    return true;
}

/// Bilinear sample together with the spatial derivative d(value)/d(x,y).
template <class T>
bool bilinear_sample_grad(const Image<T>& img, double x, double y, int c, double* value, double* dx, double* dy) {
    const int x0 = int(std::floor(x));
    const int y0 = int(std::floor(y));
    if (x0 < 0 || y0 < 0 || x0 + 1 >= img.width || y0 + 1 >= img.height) return false;
    const double fx = x - x0;
    const double fy = y - y0;
    const double v00 = img(x0, y0, c);
    const double v10 = img(x0 + 1, y0, c);
    const double v01 = img(x0, y0 + 1, c);
    const double v11 = img(x0 + 1, y0 + 1, c);
    *value = (1 - fy) * ((1 - fx) * v00 + fx * v10) + fy * ((1 - fx) * v01 + fx * v11);
    *dx = (1 - fy) * (v10 - v00) + fy * (v11 - v01);
    *dy = (1 - fx) * (v01 - v00) + fx * (v11 - v10);
    return true;
}

/// Rec. 601 luma from an RGB image.
template <class T>
Image<T> to_grayscale(const Image<T>& rgb) {
    if (rgb.channels != 3) throw DimensionMismatch("to_grayscale expects 3 channels");
    Image<T> out(rgb.width, rgb.height, 1);
    for (size_t p = 0; p < rgb.pixel_count(); ++p) {
        const T* px = rgb.data.data() + p * 3;
        out.data[p] = T(0.299) * px[0] + T(0.587) * px[1] + T(0.114) * px[2];
    }
    return out;
}

}  // namespace gssr
