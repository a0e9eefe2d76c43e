#include "wenlr/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "wenlr/bicubic.hpp"
#include "wenlr/config.hpp"

namespace wenlr {

void SolverConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + " must be positive");
    }
  };
  positive(gamma, "gamma");
  positive(eta_init, "eta");
  positive(mu_init, "mu");
  positive(c1, "c1");
  positive(intensity_scale, "intensity-scale");
  positive(epsilon, "epsilon");
  positive(cg_tol, "cg-tol");
  positive(sigma, "sigma");
  positive(chi, "chi");
  positive(noise_level, "noise-level");
  if (!(rho > 1.0)) throw std::invalid_argument("rho must be greater than 1");
  if (iterations < 0) throw std::invalid_argument("iterations must be non-negative");
  if (cg_max_iter < 1) throw std::invalid_argument("cg-max-iter must be positive");
  if (patch_size < 1 || patch_size % 2 == 0) throw std::invalid_argument("patch-size must be odd");
  if (stride < 1) throw std::invalid_argument("stride must be positive");
  if (window < patch_size || window % 2 == 0) {
    throw std::invalid_argument("window must be odd and at least the patch size");
  }
  if (nlr_neighbors < 1) throw std::invalid_argument("nlr-neighbors must be positive");
  if (prior_neighbors < 1) throw std::invalid_argument("prior-neighbors must be positive");
  if (training_samples < 2) throw std::invalid_argument("training-samples must be at least 2");
}

double SolverConfig::effective_h1() const {
  if (h1 > 0.0) return h1;
  return 2.0 * patch_size * patch_size * noise_level * noise_level;
}

std::size_t SolverConfig::search_count() const {
  return std::max({training_samples, prior_neighbors, nlr_neighbors + 1});
}

double blend_code(double code, double beta, double eta, double gamma) {
  const double ratio = eta / gamma;
  return (code + ratio * beta) / (1.0 + ratio);
}

SolverState initialize(const Image& y, int factor, const SolverConfig& cfg) {
  if (factor < 2) throw DimensionError("scale factor must be at least 2");
  if (y.empty()) throw DimensionError("empty low-resolution image");
  cfg.validate();
  SolverState s;
  s.y = y;
  s.factor = factor;
  s.x = bicubic_upscale(y, factor);
  const PatchSystem sys(s.x.dims(), cfg.patch_size, cfg.stride);
  const std::size_t coeffs = sys.count() * sys.patch_length();
  s.multiplier.assign(y.size(), 0.0);
  s.mu = cfg.mu_init;
  s.weights.assign(y.size(), 1.0);
  s.eta.assign(coeffs, cfg.eta_init);
  s.alphas.assign(coeffs, 0.0);
  s.betas.assign(coeffs, 0.0);
  s.k2 = cfg.k2 > 0.0 ? cfg.k2 : 0.0;
  s.iteration = 0;
  return s;
}

IterationModel build_iteration_model(const SolverState& state, const PatchSystem& sys,
                                     const SolverConfig& cfg) {
  const Image& x = state.x;
  if (x.dims() != sys.dims()) throw DimensionError("estimate does not match patch system");
  const std::size_t k = sys.count();
  const std::size_t len = sys.patch_length();
  const auto dim = static_cast<Eigen::Index>(len);
  const int p = sys.patch_size();
  const double h1 = cfg.effective_h1();
  const KernelWeights kernel = kernel_weights(p, cfg.sigma);

  SearchConfig search;
  search.window = cfg.window;
  search.exclude_self = false;
  const std::size_t count = cfg.search_count();

  IterationModel model;
  model.codes.resize(k * len);
  model.alphas.resize(k * len);
  model.betas.resize(k * len);
  model.decoded.resize(k * len);
  std::vector<std::vector<std::int32_t>> row_cols(k);
  std::vector<std::vector<double>> row_vals(k);
  std::vector<double> row_bias(k, 0.0);
  std::vector<char> row_ok(k, 0);
  double worst_ortho = 0.0;
  double worst_diag = 0.0;

#pragma omp parallel for schedule(dynamic, 64) reduction(max : worst_ortho, worst_diag)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(k); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const SimilarPatchSet similar = find_similar(x, sys, i, search, count);
    const Origin self = sys.origin(i);

    Eigen::MatrixXd pool(dim, static_cast<Eigen::Index>(similar.size()));
    for (std::size_t j = 0; j < similar.size(); ++j) {
      extract_window(x, similar.neighbors[j], p,
                     std::span<double>(pool.col(static_cast<Eigen::Index>(j)).data(), len));
    }

    // Training group: the first n neighbours (the patch itself included).
    const std::size_t n = std::min(cfg.training_samples, similar.size());
    const Eigen::MatrixXd group = pool.leftCols(static_cast<Eigen::Index>(n));
    SubDictionary dict;
    if (n >= 2) {
      dict = train_subdictionary(group);
      if (cfg.verify_dictionaries) {
        const DictionaryDiagnostics d = check_subdictionary(dict, sample_covariance(group));
        worst_ortho = std::max(worst_ortho, d.orthonormality_error);
        worst_diag = std::max(worst_diag, d.diagonalization_error);
      }
    } else {
      dict.basis = Eigen::MatrixXd::Identity(dim, dim);
      dict.mean = Eigen::VectorXd::Zero(dim);
      dict.eigenvalues = Eigen::VectorXd::Zero(dim);
    }

    // Nonlocal prior from the first t neighbours.
    const std::size_t t = std::min(cfg.prior_neighbors, similar.size());
    const std::vector<double> w =
        similarity_weights(std::span<const double>(similar.distances).first(t), h1);
    const Eigen::VectorXd beta = prior_coefficient(dict, pool.leftCols(static_cast<Eigen::Index>(t)), w);

    Eigen::VectorXd patch(dim);
    sys.extract(x, i, std::span<double>(patch.data(), len));
    const Eigen::VectorXd code = dict.code(patch);
    Eigen::VectorXd alpha(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      alpha(j) = blend_code(code(j), beta(j), state.eta[i * len + static_cast<std::size_t>(j)],
                            cfg.gamma);
    }
    const Eigen::VectorXd est = dict.decode(alpha);
    std::copy_n(code.data(), len, model.codes.begin() + static_cast<std::ptrdiff_t>(i * len));
    std::copy_n(alpha.data(), len, model.alphas.begin() + static_cast<std::ptrdiff_t>(i * len));
    std::copy_n(beta.data(), len, model.betas.begin() + static_cast<std::ptrdiff_t>(i * len));
    std::copy_n(est.data(), len, model.decoded.begin() + static_cast<std::ptrdiff_t>(i * len));

    // Regression row for the patch centre from the nearest non-self patches.
    SimilarPatchSet others;
    others.query_index = i;
    for (std::size_t j = 0; j < similar.size() && others.size() < cfg.nlr_neighbors; ++j) {
      if (similar.neighbors[j] == self) continue;
      others.neighbors.push_back(similar.neighbors[j]);
      others.distances.push_back(similar.distances[j]);
    }
    row_ok[i] = fit_center_row(x, sys, i, others, kernel, cfg.chi, cfg.nlr_neighbors, row_cols[i],
                               row_vals[i], row_bias[i])
                    ? 1
                    : 0;
  }

  NlrOperatorBuilder builder(x.dims());
  for (std::size_t i = 0; i < k; ++i) {
    if (row_ok[i]) builder.set_row(sys.center_index(i), row_cols[i], row_vals[i], row_bias[i]);
  }
  model.nlr = builder.build();
  model.dictionary_check = {worst_ortho, worst_diag};
  return model;
}

std::vector<double> fidelity_residual(const SolverState& state, const NlrOperator& nlr,
                                      const Image& x) {
  const Downsampler d(state.factor, x.dims());
  std::vector<double> r(state.y.size());
  for (std::size_t j = 0; j < r.size(); ++j) {
    const std::size_t row = d.hr_index(j);
    r[j] = state.y[j] - (nlr.apply_row(row, x.data()) + nlr.bias(row));
  }
  return r;
}

std::vector<double> update_weights(const SolverState& state, const NlrOperator& nlr,
                                   const SolverConfig& cfg) {
  std::vector<double> w = fidelity_residual(state, nlr, state.x);
  for (double& v : w) {
    const double scaled = cfg.intensity_scale * v;
    v = std::exp(-cfg.c1 * scaled * scaled);
  }
  return w;
}

LinearOperator image_update_operator(const SolverState& state, const NlrOperator& nlr,
                                     const Image& counts, double gamma) {
  const Downsampler d(state.factor, counts.dims());
  const std::size_t n = counts.size();
  const std::size_t m = state.y.size();
  std::vector<std::size_t> grid(m);
  for (std::size_t j = 0; j < m; ++j) grid[j] = d.hr_index(j);

  LinearOperator op;
  op.dim = n;
  op.apply = [&nlr, &counts, &state, gamma, grid = std::move(grid)](std::span<const double> in,
                                                                     std::span<double> out) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = gamma * counts[i] * in[i];
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const std::size_t row = grid[j];
      const double v = state.weights[j] * nlr.apply_row(row, in);
      const auto cols = nlr.row_columns(row);
      const auto vals = nlr.row_weights(row);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        out[static_cast<std::size_t>(cols[k])] += vals[k] * v;
      }
      out[row] += state.mu * in[row];
    }
  };
  return op;
}

std::vector<double> image_update_diagonal(const SolverState& state, const NlrOperator& nlr,
                                          const Image& counts, double gamma) {
  const Downsampler d(state.factor, counts.dims());
  std::vector<double> diag(counts.size());
  for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = gamma * counts[i];
  for (std::size_t j = 0; j < state.y.size(); ++j) {
    const std::size_t row = d.hr_index(j);
    const auto cols = nlr.row_columns(row);
    const auto vals = nlr.row_weights(row);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      diag[static_cast<std::size_t>(cols[k])] += state.weights[j] * vals[k] * vals[k];
    }
    diag[row] += state.mu;
  }
  return diag;
}

std::vector<double> image_update_rhs(const SolverState& state, const NlrOperator& nlr,
                                     const PatchSystem& sys, std::span<const double> decoded,
                                     double gamma) {
  const PatchAggregate agg = aggregate_patches(decoded, sys);
  const Downsampler d(state.factor, sys.dims());
  std::vector<double> rhs(agg.sum.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = gamma * agg.sum[i];
  for (std::size_t j = 0; j < state.y.size(); ++j) {
    const std::size_t row = d.hr_index(j);
    const double v = state.weights[j] * (state.y[j] - nlr.bias(row));
    const auto cols = nlr.row_columns(row);
    const auto vals = nlr.row_weights(row);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      rhs[static_cast<std::size_t>(cols[k])] += vals[k] * v;
    }
    rhs[row] += state.mu * state.y[j] + 0.5 * state.multiplier[j];
  }
  return rhs;
}

ImageUpdate update_image(const SolverState& state, const IterationModel& model,
                         const PatchSystem& sys, const SolverConfig& cfg) {
  const Image counts = sys.counts();
  const LinearOperator op = image_update_operator(state, model.nlr, counts, cfg.gamma);
  const std::vector<double> rhs =
      image_update_rhs(state, model.nlr, sys, model.decoded, cfg.gamma);
  std::vector<double> inv_diag = image_update_diagonal(state, model.nlr, counts, cfg.gamma);
  for (double& v : inv_diag) v = 1.0 / v;

  ImageUpdate upd;
  upd.x = state.x;
  upd.cg = conjugate_gradient(op, rhs, upd.x.data(), {cfg.cg_tol, cfg.cg_max_iter}, inv_diag);
  for (double v : upd.x.data()) {
    if (!std::isfinite(v)) throw NumericalError("image update produced non-finite values");
  }
  upd.clamped = upd.x.clamp(0.0, 1.0);
  return upd;
}

void update_multiplier_and_eta(SolverState& state, const SolverConfig& cfg) {
  const Downsampler d(state.factor, state.x.dims());
  for (std::size_t j = 0; j < state.y.size(); ++j) {
    state.multiplier[j] += state.mu * (state.y[j] - state.x[d.hr_index(j)]);
  }
  state.mu *= cfg.rho;
  for (std::size_t i = 0; i < state.eta.size(); ++i) {
    const double gap = state.alphas[i] - state.betas[i];
    state.eta[i] = state.k2 / (gap * gap + cfg.epsilon);
  }
}

double objective_value(const SolverState& state, const IterationModel& model,
                       const PatchSystem& sys, const SolverConfig& cfg, const Image& x) {
  const std::vector<double> r = fidelity_residual(state, model.nlr, x);
  double fidelity = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) fidelity += state.weights[j] * r[j] * r[j];

  const std::size_t len = sys.patch_length();
  std::vector<double> patch(len);
  double patch_term = 0.0;
  for (std::size_t i = 0; i < sys.count(); ++i) {
    sys.extract(x, i, patch);
    for (std::size_t j = 0; j < len; ++j) {
      const double dv = patch[j] - model.decoded[i * len + j];
      patch_term += dv * dv;
    }
  }
  double prior = 0.0;
  for (std::size_t i = 0; i < model.alphas.size(); ++i) {
    const double gap = model.alphas[i] - model.betas[i];
    prior += state.eta[i] * gap * gap;
  }
  return fidelity + cfg.gamma * patch_term + prior;
}

double excess_kurtosis(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  if (m2 == 0.0) return 0.0;
  return m4 / (m2 * m2) - 3.0;
}

namespace {

void check_finite(std::span<const double> v, const char* stage, int iteration) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw NumericalError(std::string("non-finite value in ") + stage + " at iteration " +
                           std::to_string(iteration));
    }
  }
}

std::pair<double, double> consistency(const SolverState& s) {
  const Downsampler d(s.factor, s.x.dims());
  double inf = 0.0;
  double l2 = 0.0;
  for (std::size_t j = 0; j < s.y.size(); ++j) {
    const double r = s.y[j] - s.x[d.hr_index(j)];
    inf = std::max(inf, std::abs(r));
    l2 += r * r;
  }
  return {inf, std::sqrt(l2)};
}

}  // namespace

InterpolationResult interpolate(const Image& y, int factor, const SolverConfig& cfg,
                                const IterationObserver& observer) {
  SolverState state = initialize(y, factor, cfg);
  const PatchSystem sys(state.x.dims(), cfg.patch_size, cfg.stride);

  InterpolationResult result;
  result.report.config = config_to_key_values(cfg);
  std::tie(result.report.initial_residual_inf, result.report.initial_residual_l2) =
      consistency(state);

  using clock = std::chrono::steady_clock;
  for (int s = 1; s <= cfg.iterations; ++s) {
    const auto start = clock::now();
    state.iteration = s;

    // Step 1 (and step 5 of the previous iteration): rebuild the patch model.
    const IterationModel model = build_iteration_model(state, sys, cfg);
    check_finite(model.decoded, "code update", s);
    check_finite(model.nlr.biases(), "NLR operator", s);
    state.alphas = model.alphas;
    state.betas = model.betas;
    if (state.k2 <= 0.0) {
      double mean_gap = 0.0;
      for (std::size_t i = 0; i < state.alphas.size(); ++i) {
        const double g = state.alphas[i] - state.betas[i];
        mean_gap += g * g;
      }
      mean_gap /= static_cast<double>(state.alphas.size());
      state.k2 = cfg.eta_init * (mean_gap + cfg.epsilon);
    }

    // Step 2: image update.
    const ImageUpdate upd = update_image(state, model, sys, cfg);
    IterationRecord rec;
    rec.iteration = s;
    rec.objective = objective_value(state, model, sys, cfg, upd.x);
    rec.cg_iterations = upd.cg.iterations;
    rec.cg_residual = upd.cg.relative_residual;
    rec.cg_converged = upd.cg.converged;
    rec.clamped = upd.clamped;
    state.x = upd.x;
    if (!upd.cg.converged) {
      result.report.warnings.push_back("iteration " + std::to_string(s) +
                                       ": CG stopped at max_iter with relative residual " +
                                       std::to_string(upd.cg.relative_residual));
    }

    // Steps 3-4: multiplier, penalty, weights, reweighting.
    rec.mu = state.mu;
    update_multiplier_and_eta(state, cfg);
    const std::vector<double> r = fidelity_residual(state, model.nlr, state.x);
    state.weights = update_weights(state, model.nlr, cfg);
    check_finite(state.multiplier, "multiplier update", s);
    check_finite(state.eta, "reweighting", s);

    std::vector<double> weighted(r.size());
    double wsum = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      weighted[j] = std::sqrt(state.weights[j]) * r[j];
      wsum += state.weights[j];
    }
    rec.mean_weight = wsum / static_cast<double>(r.size());
    rec.kurtosis_residual = excess_kurtosis(r);
    rec.kurtosis_weighted = excess_kurtosis(weighted);
    std::tie(rec.residual_inf, rec.residual_l2) = consistency(state);
    rec.orthonormality_error = model.dictionary_check.orthonormality_error;
    rec.diagonalization_error = model.dictionary_check.diagonalization_error;
    rec.seconds = std::chrono::duration<double>(clock::now() - start).count();

    if (!result.report.iterations.empty() &&
        rec.objective > result.report.iterations.back().objective) {
      result.report.warnings.push_back("iteration " + std::to_string(s) +
                                       ": objective increased");
    }
    result.report.iterations.push_back(rec);
    if (observer) observer(state, model, rec);
  }
  result.report.k2 = state.k2;

  const auto& its = result.report.iterations;
  if (its.size() >= 3) {
    for (std::size_t k = its.size() - 2; k < its.size(); ++k) {
      if (its[k].residual_inf > its[k - 1].residual_inf) {
        result.report.warnings.push_back("consistency residual increased at iteration " +
                                         std::to_string(its[k].iteration));
      }
    }
  }

  state.x.clamp(0.0, 1.0);
  result.image = std::move(state.x);
  return result;
}

void ConvergenceReport::write_log(std::ostream& out) const {
  for (const auto& [k, v] : config) out << "# " << k << " = " << v << '\n';
  out << "# k2 = " << k2 << '\n';
  out << "initial  |y-Dx|_inf=" << initial_residual_inf << "  |y-Dx|_2=" << initial_residual_l2
      << '\n';
  for (const IterationRecord& r : iterations) {
    out << "iter " << std::setw(3) << r.iteration << "  |y-Dx|_inf=" << r.residual_inf
        << "  |y-Dx|_2=" << r.residual_l2 << "  objective=" << r.objective
        << "  cg=" << r.cg_iterations << (r.cg_converged ? "" : "(max)")
        << "  mu=" << r.mu << "  kurt(r)=" << r.kurtosis_residual
        << "  kurt(w^.5 r)=" << r.kurtosis_weighted << "  clamped=" << r.clamped
        << "  time=" << std::fixed << std::setprecision(2) << r.seconds << "s"
        << std::defaultfloat << std::setprecision(6) << '\n';
  }
  for (const std::string& w : warnings) out << "warning: " << w << '\n';
}

void ConvergenceReport::write_key_values(std::ostream& out) const {
  const auto old = out.precision(17);
  for (const IterationRecord& r : iterations) {
    out << "iteration=" << r.iteration << " residual_inf=" << r.residual_inf
        << " residual_l2=" << r.residual_l2 << " objective=" << r.objective
        << " cg_iterations=" << r.cg_iterations << " cg_residual=" << r.cg_residual
        << " cg_converged=" << (r.cg_converged ? 1 : 0) << " clamped=" << r.clamped
        << " mu=" << r.mu << " mean_weight=" << r.mean_weight
        << " kurtosis_residual=" << r.kurtosis_residual
        << " kurtosis_weighted=" << r.kurtosis_weighted
        << " orthonormality_error=" << r.orthonormality_error
        << " diagonalization_error=" << r.diagonalization_error << " seconds=" << r.seconds
        << '\n';
  }
  out.precision(old);
}

}  // namespace wenlr
