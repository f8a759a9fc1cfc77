#include "gssr/losses/ssim.hpp"

#include "gssr/core/kernels.hpp"
#include "gssr/core/types.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace gssr {

namespace {

constexpr int kWin = 11;
constexpr int kRadius = kWin / 2;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

std::array<double, kWin> window() {
    std::array<double, kWin> w{};
    double sum = 0;
    for (int i = 0; i < kWin; ++i) {
        const double d = i - kRadius;
        w[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
        sum += w[i];
    }
    for (auto& v : w) v /= sum;
    return w;
}

/// Valid-mode separable correlation of a W×H plane with the 11-tap window:
/// rows first ((W−10)×H), then columns ((W−10)×(H−10)).
void conv_valid(const std::vector<double>& in, int W, int H, const std::array<double, kWin>& k,
                std::vector<double>& tmp, std::vector<double>& out) {
    const int vw = W - kWin + 1;
    const int vh = H - kWin + 1;
    tmp.assign(size_t(vw) * H, 0.0);
    for (int y = 0; y < H; ++y) {
        const double* row = in.data() + size_t(y) * W;
        double* trow = tmp.data() + size_t(y) * vw;
        for (int x = 0; x < vw; ++x) {
            double acc = 0;
            for (int j = 0; j < kWin; ++j) acc += k[j] * row[x + j];
            trow[x] = acc;
        }
    }
    out.assign(size_t(vw) * vh, 0.0);
    for (int y = 0; y < vh; ++y) {
        double* orow = out.data() + size_t(y) * vw;
        for (int j = 0; j < kWin; ++j) {
            const double kj = k[j];
            const double* trow = tmp.data() + size_t(y + j) * vw;
            for (int x = 0; x < vw; ++x) orow[x] += kj * trow[x];
        }
    }
}

/// Adjoint of conv_valid: scatters a (W−10)×(H−10) map back onto W×H.
void conv_valid_adjoint(const std::vector<double>& g, int W, int H, const std::array<double, kWin>& k,
                        std::vector<double>& tmp, std::vector<double>& out) {
    const int vw = W - kWin + 1;
    const int vh = H - kWin + 1;
    tmp.assign(size_t(vw) * H, 0.0);
    for (int y = 0; y < vh; ++y) {
        const double* grow = g.data() + size_t(y) * vw;
        for (int j = 0; j < kWin; ++j) {
            const double kj = k[j];
            double* trow = tmp.data() + size_t(y + j) * vw;
            for (int x = 0; x < vw; ++x) trow[x] += kj * grow[x];
        }
    }
    out.assign(size_t(W) * H, 0.0);
    for (int y = 0; y < H; ++y) {
        const double* trow = tmp.data() + size_t(y) * vw;
        double* orow = out.data() + size_t(y) * W;
        for (int x = 0; x < vw; ++x) {
            const double gv = trow[x];
            if (gv == 0.0) continue;
            for (int j = 0; j < kWin; ++j) orow[x + j] += k[j] * gv;
        }
    }
}

}  // namespace

template <class T>
double ssim(const Image<T>& a, const Image<T>& b, Image<T>* grad_a, double grad_scale) {
    if (!a.same_shape(b)) throw DimensionMismatch("ssim: image shapes differ");
    const int W = a.width, H = a.height, C = a.channels;
    if (W < kWin || H < kWin) throw DimensionMismatch("ssim: images smaller than the 11x11 window");
    const int vw = W - kWin + 1;
    const int vh = H - kWin + 1;
    const auto k = window();
    const double denom = double(vw) * vh * C;

    std::vector<double> pa(size_t(W) * H), pb(size_t(W) * H), paa(size_t(W) * H), pbb(size_t(W) * H),
        pab(size_t(W) * H);
    std::vector<double> mu_a, mu_b, m_aa, m_bb, m_ab, tmp;
    std::vector<double> g_mu(size_t(vw) * vh), g_saa(size_t(vw) * vh), g_sab(size_t(vw) * vh);
    std::vector<double> conv1, conv2, conv3;

    double total = 0;
    for (int c = 0; c < C; ++c) {
        for (int y = 0; y < H; ++y) {
            for (int x = 0; x < W; ++x) {
                const size_t i = size_t(y) * W + x;
                const double va = double(a.at(x, y)[c]);
                const double vb = double(b.at(x, y)[c]);
                pa[i] = va;
                pb[i] = vb;
                paa[i] = va * va;
                pbb[i] = vb * vb;
                pab[i] = va * vb;
            }
        }
        conv_valid(pa, W, H, k, tmp, mu_a);
        conv_valid(pb, W, H, k, tmp, mu_b);
        conv_valid(paa, W, H, k, tmp, m_aa);
        conv_valid(pbb, W, H, k, tmp, m_bb);
        conv_valid(pab, W, H, k, tmp, m_ab);

        for (size_t i = 0; i < mu_a.size(); ++i) {
            const double ma = mu_a[i], mb = mu_b[i];
            const double saa = m_aa[i] - ma * ma;
            const double sbb = m_bb[i] - mb * mb;
            const double sab = m_ab[i] - ma * mb;
            const double A1 = 2 * ma * mb + kC1;
            const double A2 = 2 * sab + kC2;
            const double B1 = ma * ma + mb * mb + kC1;
            const double B2 = saa + sbb + kC2;
            total += (A1 * A2) / (B1 * B2);
            if (grad_a) {
                const double inv = 1.0 / (B1 * B2);
                const double dA1 = A2 * inv;
                const double dA2 = A1 * inv;
                const double dB1 = -(A1 * A2) * inv / B1;
                const double dB2 = -(A1 * A2) * inv / B2;
                // σ's are central moments: fold the μ_a chain of saa/sab in.
                g_mu[i] = dA1 * 2 * mb + dB1 * 2 * ma + dB2 * (-2 * ma) + dA2 * 2 * (-mb);
                g_saa[i] = dB2;   // coefficient of the raw second moment m_aa
                g_sab[i] = dA2 * 2;  // coefficient of the raw cross moment m_ab
            }
        }
        if (!grad_a) continue;

        // d mean-SSIM / d a(q) =
        //   corr(g_mu) + 2a·corr(g_saa) + b·corr(g_sab), since
        //   m_aa and m_ab are plain windowed moments of a² and a·b.
        conv_valid_adjoint(g_mu, W, H, k, tmp, conv1);
        conv_valid_adjoint(g_saa, W, H, k, tmp, conv2);
        conv_valid_adjoint(g_sab, W, H, k, tmp, conv3);
        const double s = grad_scale / denom;
        for (int y = 0; y < H; ++y) {
            for (int x = 0; x < W; ++x) {
                const size_t i = size_t(y) * W + x;
                const double g = conv1[i] + 2 * pa[i] * conv2[i] + pb[i] * conv3[i];
                grad_a->at(x, y)[c] += T(s * g);
            }
        }
    }
    return total / denom;
}

template double ssim<float>(const Image<float>&, const Image<float>&, Image<float>*, double);
template double ssim<double>(const Image<double>&, const Image<double>&, Image<double>*, double);

}  // namespace gssr
