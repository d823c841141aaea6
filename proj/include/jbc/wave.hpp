#pragma once

#include <vector>

#include "jbc/connecting.hpp"
#include "jbc/control.hpp"
#include "jbc/jacobi.hpp"
#include "jbc/kernels.hpp"

namespace jbc {

/// u^f(t) = sum_k h_k(t) phi(lambda_k), h_k(t) = (1/rho_k) * integral over
/// (0, t) of f(tau) S_k(t - tau). S-basis controls use the closed form of the
/// convolution; sampled controls use composite Simpson on their grid.
StateVector solve_forward(const SpectralData& sd, const Control& f, double t);

/// r(t) = sum_k S_k(t) / rho_k.
double response_function(const SpectralData& sd, double t);

/// (R^T f)(t_i) = integral over (0, t_i) of r(t_i - s) f(s) ds.
std::vector<Complex> apply_response(const SpectralData& sd, const Control& f, const TimeGrid& grid);

/// W^T f = u^f(T).
StateVector control_operator(const SpectralData& sd, const Control& f);
/// W^T f for an S-basis control: h = (G c) / rho, u = Phi h.
StateVector control_operator(const SpectralData& sd, const GramMatrix& G, const SBasisControl& f);

}  // namespace jbc
