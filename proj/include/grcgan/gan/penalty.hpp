#pragma once

#include "grcgan/gan/networks.hpp"

namespace grcgan::gan {

/// Batch mean of the Frobenius norm of the condition Jacobian of G, with
/// column j formed by central differences (G(x + h e_j, z) - G(x - h e_j, z)) / 2h.
///
/// All 2p shifted copies of the batch go through G in a single call, so a
/// batch-normalized generator sees one set of batch statistics for every
/// difference. Differentiable with respect to G's parameters only.
nn::Tensor gr_penalty_exact(const GeneratorFn& generator, const Matrix& conditions, const Matrix& noise,
                            double h);

/// Batch mean of min(||G(x + dx, z) - G(x, z)|| / ||dx||, tau1). Both
/// evaluations share one G call. Rows of `perturbations` shorter than 1e-12
/// (or non-finite) are rejected with std::invalid_argument.
nn::Tensor gr_penalty_ratio(const GeneratorFn& generator, const Matrix& conditions, const Matrix& noise,
                            const Matrix& perturbations, double tau1);

}  // namespace grcgan::gan
