#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wenlr/dictionary.hpp"
#include "wenlr/image.hpp"
#include "wenlr/nlr_operator.hpp"
#include "wenlr/numerics.hpp"
#include "wenlr/patch.hpp"
#include "wenlr/patch_search.hpp"

namespace wenlr {

struct SolverConfig {
  // Regularization and ALM schedule.
  double gamma = 0.1;
  double eta_init = 1.2;
  double mu_init = 0.68;
  double rho = 1.1;  // penalty growth, mu <- rho * mu
  // Residual weighting w = exp(-c1 * (intensity_scale * r)^2).
  double c1 = 0.006;
  double intensity_scale = 255.0;
  // Reweighting eta = k2 / ((alpha - beta)^2 + epsilon); k2 <= 0 selects
  // the automatic value computed at the first iteration.
  double k2 = 0.0;
  double epsilon = 1e-6;

  int iterations = 20;  // T
  double cg_tol = 1e-6;
  int cg_max_iter = 400;

  // Patch geometry and similar-patch search.
  int patch_size = 5;
  int stride = 1;
  int window = 31;
  std::size_t nlr_neighbors = 15;     // m
  std::size_t prior_neighbors = 23;   // t
  std::size_t training_samples = 60;  // n
  double h1 = 0.0;                    // <= 0 selects 2 * p^2 * noise_level^2
  double noise_level = 0.05;

  // Regression kernel and ridge.
  double sigma = 1.7;
  double chi = 0.01;

  bool verify_dictionaries = false;  // record orthonormality/diagonalization residuals

  void validate() const;
  double effective_h1() const;
  std::size_t search_count() const;
};

/// Everything carried between outer iterations.
struct SolverState {
  Image y;
  int factor = 2;
  Image x;
  std::vector<double> multiplier;  // f, one per LR pixel
  double mu = 0.0;
  std::vector<double> weights;  // diagonal of W, one per LR pixel
  std::vector<double> eta;      // K x p^2
  std::vector<double> alphas;   // K x p^2
  std::vector<double> betas;    // K x p^2
  double k2 = 0.0;
  int iteration = 0;
};

/// Quantities rebuilt from the current estimate at the start of an outer
/// iteration: the NLR operator, the code update and the patch estimates
/// decode(alpha_i) aggregated by the image update.
struct IterationModel {
  NlrOperator nlr;
  std::vector<double> codes;    // analysis codes of the current patches
  std::vector<double> alphas;   // blended codes
  std::vector<double> betas;    // nonlocal prior codes
  std::vector<double> decoded;  // K x p^2 patch estimates
  DictionaryDiagnostics dictionary_check;
};

struct ImageUpdate {
  Image x;
  CgResult cg;
  std::size_t clamped = 0;
};

struct IterationRecord {
  int iteration = 0;
  double residual_inf = 0.0;  // ||y - Dx||_inf after the update
  double residual_l2 = 0.0;
  double objective = 0.0;
  int cg_iterations = 0;
  double cg_residual = 0.0;
  bool cg_converged = false;
  std::size_t clamped = 0;
  double mu = 0.0;
  double mean_weight = 0.0;
  double kurtosis_residual = 0.0;  // excess kurtosis of r = y - D(Hx + b)
  double kurtosis_weighted = 0.0;  // excess kurtosis of w^{1/2} r
  double orthonormality_error = 0.0;
  double diagonalization_error = 0.0;
  double seconds = 0.0;
};

struct ConvergenceReport {
  std::vector<std::pair<std::string, std::string>> config;
  double initial_residual_inf = 0.0;
  double initial_residual_l2 = 0.0;
  double k2 = 0.0;
  std::vector<IterationRecord> iterations;
  std::vector<std::string> warnings;

  /// Human-readable log, one line per iteration.
  void write_log(std::ostream& out) const;
  /// key=value records, one line per iteration.
  void write_key_values(std::ostream& out) const;
};

struct InterpolationResult {
  Image image;
  ConvergenceReport report;
};

/// Closed-form code update: argmin_a gamma (a - code)^2 + eta (a - beta)^2.
double blend_code(double code, double beta, double eta, double gamma);

/// Bicubic start, f = 0, W = 1, eta = eta_init, mu = mu_init.
SolverState initialize(const Image& y, int factor, const SolverConfig& cfg);

/// Similar-patch search, PCA sub-dictionaries, nonlocal priors, code update
/// and NLR operator, all from state.x.
IterationModel build_iteration_model(const SolverState& state, const PatchSystem& sys,
                                     const SolverConfig& cfg);

/// LR residual r = y - D(Hx + b).
std::vector<double> fidelity_residual(const SolverState& state, const NlrOperator& nlr,
                                      const Image& x);

/// w = exp(-c1 * (scale * r)^2) with r the fidelity residual of state.x.
std::vector<double> update_weights(const SolverState& state, const NlrOperator& nlr,
                                   const SolverConfig& cfg);

/// The x-update system matrix
///   (DH)^T W (DH) + gamma sum R_i^T R_i + mu D^T D
/// as a matrix-free operator, and its diagonal. The operator keeps
/// references to `state`, `nlr` and `counts`.
LinearOperator image_update_operator(const SolverState& state, const NlrOperator& nlr,
                                     const Image& counts, double gamma);
std::vector<double> image_update_diagonal(const SolverState& state, const NlrOperator& nlr,
                                          const Image& counts, double gamma);
/// Right-hand side
///   (DH)^T W (y - D b) + gamma sum R_i^T decoded_i + mu D^T y + D^T f / 2.
std::vector<double> image_update_rhs(const SolverState& state, const NlrOperator& nlr,
                                     const PatchSystem& sys, std::span<const double> decoded,
                                     double gamma);

/// Solves the x-update by CG warm-started at state.x, then clamps to [0,1].
ImageUpdate update_image(const SolverState& state, const IterationModel& model,
                         const PatchSystem& sys, const SolverConfig& cfg);

/// f += mu (y - Dx); mu *= rho; eta = k2 / ((alpha - beta)^2 + epsilon).
void update_multiplier_and_eta(SolverState& state, const SolverConfig& cfg);

/// Objective value ||W^{1/2}(y - D(Hx+b))||^2 + gamma sum ||R_i x - decoded_i||^2
/// + sum eta (alpha - beta)^2.
double objective_value(const SolverState& state, const IterationModel& model,
                       const PatchSystem& sys, const SolverConfig& cfg, const Image& x);

double excess_kurtosis(std::span<const double> values);

/// Observer invoked after each completed outer iteration.
using IterationObserver =
    std::function<void(const SolverState&, const IterationModel&, const IterationRecord&)>;

/// Runs the full alternating scheme for cfg.iterations outer iterations.
InterpolationResult interpolate(const Image& y, int factor, const SolverConfig& cfg,
                                const IterationObserver& observer = {});

}  // namespace wenlr
