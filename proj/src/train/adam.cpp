#include "gssr/train/optimizer.hpp"

#include <cmath>

namespace gssr {

template <class T>
void OptimizerState<T>::init_like(const GaussianSet<T>& set) {
    m_centers.assign(set.centers.size(), T(0));
    v_centers.assign(set.centers.size(), T(0));
    m_rotations.assign(set.rotations.size(), T(0));
    v_rotations.assign(set.rotations.size(), T(0));
    m_log_scales.assign(set.log_scales.size(), T(0));
    v_log_scales.assign(set.log_scales.size(), T(0));
    m_opacity.assign(set.opacity_logits.size(), T(0));
    v_opacity.assign(set.opacity_logits.size(), T(0));
    m_sh.assign(set.sh.size(), T(0));
    v_sh.assign(set.sh.size(), T(0));
}

namespace {

template <class T>
void gather(std::vector<T>& data, const std::vector<uint32_t>& parent_of, size_t stride) {
    std::vector<T> out(parent_of.size() * stride);
    for (size_t j = 0; j < parent_of.size(); ++j)
        for (size_t k = 0; k < stride; ++k) out[j * stride + k] = data[size_t(parent_of[j]) * stride + k];
    data = std::move(out);
}

}  // namespace

template <class T>
void OptimizerState<T>::remap(const std::vector<uint32_t>& parent_of, int basis_count) {
    const size_t sh_stride = size_t(basis_count) * 3;
    for (auto* vec : {&m_centers, &v_centers, &m_log_scales, &v_log_scales}) gather(*vec, parent_of, 3);
    for (auto* vec : {&m_rotations, &v_rotations}) gather(*vec, parent_of, 4);
    for (auto* vec : {&m_opacity, &v_opacity}) gather(*vec, parent_of, 1);
    for (auto* vec : {&m_sh, &v_sh}) gather(*vec, parent_of, sh_stride);
}

template <class T>
void OptimizerState<T>::extend_to(size_t n, int basis_count) {
    if (n < size()) throw ShapeMismatch("OptimizerState::extend_to cannot shrink");
    const size_t sh_stride = size_t(basis_count) * 3;
    for (auto* vec : {&m_centers, &v_centers, &m_log_scales, &v_log_scales}) vec->resize(n * 3, T(0));
    for (auto* vec : {&m_rotations, &v_rotations}) vec->resize(n * 4, T(0));
    for (auto* vec : {&m_opacity, &v_opacity}) vec->resize(n, T(0));
    for (auto* vec : {&m_sh, &v_sh}) vec->resize(n * sh_stride, T(0));
}

namespace {

/// In-place moment update of one group; bias corrections are precomputed by
/// the caller since the step counter is shared. Arithmetic runs in double
/// regardless of the storage type.
template <class T>
void adam_group(std::vector<T>& p, const std::vector<T>& g, std::vector<T>& m, std::vector<T>& v, double lr,
                double bias1, double bias2, const AdamConfig& adam) {
    for (size_t i = 0; i < p.size(); ++i) {
        const double gi = double(g[i]);
        const double mi = adam.beta1 * double(m[i]) + (1.0 - adam.beta1) * gi;
        const double vi = adam.beta2 * double(v[i]) + (1.0 - adam.beta2) * gi * gi;
        m[i] = T(mi);
        v[i] = T(vi);
        const double m_hat = mi / bias1;
        const double v_hat = vi / bias2;
        p[i] = T(double(p[i]) - lr * m_hat / (std::sqrt(v_hat) + adam.eps));
    }
}

}  // namespace

template <class T>
void optimizer_step(GaussianSet<T>& params, const ParamGrads<T>& grads, OptimizerState<T>& state,
                    const LearningRates& lr, const AdamConfig& adam) {
    if (grads.centers.size() != params.centers.size() || grads.rotations.size() != params.rotations.size() ||
        grads.log_scales.size() != params.log_scales.size() ||
        grads.opacity_logits.size() != params.opacity_logits.size() || grads.sh.size() != params.sh.size())
        throw ShapeMismatch("optimizer_step: gradient lengths disagree with parameters");
    if (state.m_centers.size() != params.centers.size() || state.m_sh.size() != params.sh.size() ||
        state.m_opacity.size() != params.opacity_logits.size())
        throw ShapeMismatch("optimizer_step: optimizer state lengths disagree with parameters");

    state.step += 1;
    const double bias1 = 1.0 - std::pow(adam.beta1, double(state.step));
    const double bias2 = 1.0 - std::pow(adam.beta2, double(state.step));

    adam_group(params.centers, grads.centers, state.m_centers, state.v_centers, lr.centers, bias1, bias2, adam);
    adam_group(params.rotations, grads.rotations, state.m_rotations, state.v_rotations, lr.rotations, bias1, bias2,
               adam);
    adam_group(params.log_scales, grads.log_scales, state.m_log_scales, state.v_log_scales, lr.log_scales, bias1,
               bias2, adam);
    adam_group(params.opacity_logits, grads.opacity_logits, state.m_opacity, state.v_opacity, lr.opacity_logits,
               bias1, bias2, adam);
    adam_group(params.sh, grads.sh, state.m_sh, state.v_sh, lr.sh, bias1, bias2, adam);

    for (size_t i = 0; i < params.size(); ++i) {
        Vec4<T> q = params.rotation(i);
        const double n = std::sqrt(double(q[0]) * q[0] + double(q[1]) * q[1] + double(q[2]) * q[2] +
                                   double(q[3]) * q[3]);
        if (n < 1e-12) {
            params.set_rotation(i, Vec4<T>(T(1), T(0), T(0), T(0)));
        } else {
            for (int k = 0; k < 4; ++k) q[k] = T(double(q[k]) / n);
            params.set_rotation(i, q);
        }
    }
}

#define GSSR_OPTIMIZER_IMPL(T)                                                                        \
    template struct OptimizerState<T>;                                                                \
    template void optimizer_step<T>(GaussianSet<T>&, const ParamGrads<T>&, OptimizerState<T>&,        \
                                    const LearningRates&, const AdamConfig&);
GSSR_OPTIMIZER_IMPL(float)
GSSR_OPTIMIZER_IMPL(double)
#undef GSSR_OPTIMIZER_IMPL

}  // namespace gssr
