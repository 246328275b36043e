#include "fermicov/verify.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <omp.h>

namespace fermicov {

bool bound_passes(double slack, double bound) { return slack >= -1e-10 * std::max(1.0, bound); }

void GeneratorConfig::validate() const {
  if (max_d < 1 || max_m < 1 || max_N < 1) throw DomainError("generator: max_d, max_m, max_N must be >= 1");
  if (n_values.empty() || betas.empty()) throw DomainError("generator: n_values and betas must be nonempty");
  for (int n : n_values)
    if (n < 2 || n % 2 != 0) throw DomainError("generator: every n must be even and >= 2");
  for (double b : betas)
    if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("generator: every beta must be positive");
  if (!(max_scale > 0.0) || !std::isfinite(max_scale)) throw DomainError("generator: max_scale must be positive");
  if (!(zero_chi_rate >= 0.0 && zero_chi_rate <= 1.0)) throw DomainError("generator: zero_chi_rate must lie in [0, 1]");
}

namespace {

RVector random_spectrum(Rng& rng, int d, const DiscreteTorus& torus, double max_scale) {
  const double c = torus.inverse_spacing();
  RVector e(d);
  for (int i = 0; i < d; ++i) {
    const int kind = uniform_int(rng, 0, 9);
    if (kind == 0) {
      const double special[] = {0.0, c, 2.0 * c, -c, 0.5 * c};
      e(i) = special[uniform_int(rng, 0, 4)];
    } else {
      const double mag = c * std::pow(10.0, uniform(rng, -3.0, std::log10(max_scale)));
      e(i) = uniform_int(rng, 0, 1) ? mag : -mag;
    }
  }
  return e;
}

CutoffSpec random_cutoff(Rng& rng, const GeneratorConfig& cfg, const RVector& spec) {
  if (uniform(rng, 0.0, 1.0) < cfg.zero_chi_rate) {
    const double far = spec.cwiseAbs().maxCoeff() + 1.0;
    return CutoffSpec::indicator(2.0 * far, 3.0 * far);
  }
  int kind = 0;
  switch (cfg.chi_source) {
    case GeneratorConfig::ChiSource::One: kind = 0; break;
    case GeneratorConfig::ChiSource::Indicator: kind = 1; break;
    case GeneratorConfig::ChiSource::Gaussian: kind = 2; break;
    case GeneratorConfig::ChiSource::Mixed: kind = uniform_int(rng, 0, 2); break;
  }
  const double lo = spec.minCoeff(), hi = spec.maxCoeff();
  const double span = std::max(1.0, hi - lo);
  if (kind == 1) {
    const double a = uniform(rng, lo - 0.5 * span, hi);
    return CutoffSpec::indicator(a, a + uniform(rng, 0.0, 1.5 * span));
  }
  if (kind == 2) return CutoffSpec::gaussian(uniform(rng, lo, hi), span * std::pow(10.0, uniform(rng, -1.0, 1.0)));
  return CutoffSpec::one();
}

}  // namespace

BoundInstance generate_instance(const GeneratorConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  const int d = uniform_int(rng, 1, cfg.max_d);
  const int m = uniform_int(rng, 1, cfg.max_m);
  const int N = uniform_int(rng, 1, cfg.max_N);
  const int n = cfg.n_values[uniform_int(rng, 0, static_cast<int>(cfg.n_values.size()) - 1)];
  const double beta = cfg.betas[uniform_int(rng, 0, static_cast<int>(cfg.betas.size()) - 1)];
  const DiscreteTorus torus(beta, n);

  const RVector spec = random_spectrum(rng, d, torus, cfg.max_scale);
  const bool diagonal = uniform_int(rng, 0, 4) == 0;
  const CMatrix h = diagonal ? CMatrix(spec.cast<cplx>().asDiagonal()) : random_hermitian(rng, spec);

  bool use_bk = false;
  switch (cfg.m_source) {
    case GeneratorConfig::MSource::RandomPSD: use_bk = false; break;
    case GeneratorConfig::MSource::BK: use_bk = true; break;
    case GeneratorConfig::MSource::Mixed: use_bk = uniform_int(rng, 0, 1) == 1; break;
  }
  RMatrix M;
  if (use_bk) {
    M = bk_matrix(random_tree(rng, m), uniform(rng, 0.05, 1.0));
  } else {
    M = random_psd(rng, m, uniform_int(rng, 1, m));
  }

  BoundInstance inst{HermitianMatrix(h), torus, random_cutoff(rng, cfg, spec), M, {}};
  for (int q = 0; q < 2 * N; ++q) {
    PointSpec p;
    p.alpha = TorusPoint{uniform_int(rng, n, 2 * n - 1)};
    p.phi = random_cvector(rng, d);
    p.color = uniform_int(rng, 0, m - 1);
    inst.points.push_back(std::move(p));
  }
  return inst;
}

BoundReport evaluate_instance(long id, std::uint64_t seed, const GeneratorConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  BoundReport r;
  r.id = id;
  r.seed = seed;
  try {
    const BoundInstance inst = generate_instance(cfg, seed);
    r.d = inst.d();
    r.m = inst.m();
    r.N = inst.N();
    r.n = inst.torus.n();
    r.beta = inst.torus.beta();
    const SpectralData h = eig_hermitian(inst.H);
    r.det = covariance_det(inst, h);
    r.det_abs = std::abs(r.det);
    r.bound = determinant_bound(inst, h);
    r.slack = r.bound - r.det_abs;
    r.pass = std::isfinite(r.slack) && bound_passes(r.slack, r.bound);
  } catch (const std::exception& e) {
    r.error = e.what();
    r.pass = false;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<BoundReport> bound_check_suite(long count, const GeneratorConfig& cfg, std::uint64_t seed, int jobs,
                                           bool parallel) {
  cfg.validate();
  if (count < 0) throw DomainError("bound_check_suite: count must be >= 0");
  std::vector<BoundReport> out(count);
  if (!parallel) {
    for (long i = 0; i < count; ++i) out[i] = evaluate_instance(i, derive_seed(seed, i), cfg);
    return out;
  }
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (long i = 0; i < count; ++i) out[i] = evaluate_instance(i, derive_seed(seed, i), cfg);
  return out;
}

double sharpness_closed_form(double lambda, const DiscreteTorus& torus, int N) {
  const double y = 1.0 - torus.spacing() * lambda;
  return std::pow(y, -N) * std::pow(1.0 + std::pow(std::abs(y), -torus.n()), -N);
}

BoundInstance sharpness_instance(double lambda, const DiscreteTorus& torus, int N) {
  BoundInstance inst{HermitianMatrix::diagonal(RVector::Constant(N, lambda)), torus, CutoffSpec::one(),
                     RMatrix::Identity(1, 1), {}};
  for (int q = 0; q < 2 * N; ++q) {
    CVector e = CVector::Zero(N);
    e(q % N) = 1.0;
    inst.points.push_back({torus.zero(), e, 0});
  }
  return inst;
}

SharpParameters find_sharp_parameters(double epsilon, double beta, int max_n) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("sharpness: epsilon must lie in (0, 1)");
  if (!(beta > 0.0)) throw DomainError("sharpness: beta must be positive");
  const double target = 1.0 - epsilon;
  for (int n = 2; n <= max_n; n *= 2) {
    const DiscreteTorus torus(beta, n);
    const double ystar = std::pow(static_cast<double>(n - 1), 1.0 / n);
    double lo = torus.inverse_spacing() * (1.0 - ystar);  // argmax of g(0), <= 0
    if (lo < -1e6) break;
    const auto g0 = [&](double l) { return kernel_value(l, torus, std::nullopt, torus.zero()); };
    if (g0(lo) < target) continue;
    double hi = 0.0;  // g0(0) = 1/2 < target
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (g0(mid) >= target)
        lo = mid;
      else
        hi = mid;
    }
    return {true, lo, n, g0(lo)};
  }
  return {};
}

std::vector<SharpnessReport> sharpness_sweep(double epsilon, double beta, const std::vector<int>& N_list) {
  const SharpParameters sp = find_sharp_parameters(epsilon, beta);
  std::vector<SharpnessReport> out;
  for (int N : N_list) {
    if (N < 1) throw DomainError("sharpness: N must be >= 1");
    SharpnessReport r;
    r.epsilon = epsilon;
    r.beta = beta;
    r.N = N;
    r.lower_bound = std::pow(1.0 - epsilon, 2 * N);
    r.found = sp.found;
    if (!sp.found) {
      r.note = "no (lambda, n) found with lambda in [-1e6, 0]";
      out.push_back(r);
      continue;
    }
    r.lambda = sp.lambda;
    r.n = sp.n;
    r.g0 = sp.g0;
    const DiscreteTorus torus(beta, sp.n);
    const BoundInstance inst = sharpness_instance(sp.lambda, torus, N);
    r.det_abs = std::abs(covariance_det(inst));
    r.per_factor_bound = std::pow(determinant_bound(inst), 1.0 / (2 * N));
    r.closed_form = sharpness_closed_form(sp.lambda, torus, N);
    r.rel_error = std::abs(r.det_abs - std::abs(r.closed_form)) / std::abs(r.closed_form);
    r.pass = r.rel_error <= 1e-12 && r.det_abs >= r.lower_bound - 1e-12;
    out.push_back(r);
  }
  return out;
}

UniversalBracket universal_bound_estimate(const std::vector<BoundReport>& bounds,
                                          const std::vector<SharpnessReport>& sharp) {
  if (sharp.empty()) throw DomainError("universal_bound_estimate: no sharpness reports");
  UniversalBracket b;
  b.epsilon = sharp.front().epsilon;
  b.bound_count = static_cast<long>(bounds.size());
  b.min_slack = bounds.empty() ? 0.0 : bounds.front().slack;
  for (const auto& r : bounds) {
    if (!r.pass) ++b.bound_failures;
    b.min_slack = std::min(b.min_slack, r.slack);
  }
  for (const auto& s : sharp) {
    b.epsilon = std::min(b.epsilon, s.epsilon);
    if (!s.found || s.N < 1) continue;
    b.lower = std::max(b.lower, std::pow(s.det_abs, 1.0 / (2 * s.N)) / s.per_factor_bound);
  }
  b.upper = 1.0;
  b.pass = b.lower >= 1.0 - b.epsilon - 1e-6 && b.bound_failures == 0;
  b.note = "numerical bracket from finite sweeps; evidence, not a certificate";
  if (b.bound_failures > 0) b.note += "; bound failures present, upper side not supported";
  return b;
}

}  // namespace fermicov

namespace fermicov {

bool close_rel_abs(cplx a, cplx b, double rel, double abs) {
  const double diff = std::abs(a - b);
  return diff <= abs || diff <= rel * std::max(std::abs(a), std::abs(b));
}

std::vector<WickReport> wick_suite(int max_N, int modes, int draws, std::uint64_t seed) {
  if (max_N < 1 || max_N > 4) throw DomainError("wick_suite: max_N must lie in 1..4");
  if (draws < 1) throw DomainError("wick_suite: draws must be >= 1");
  std::vector<WickReport> out;
  std::uint64_t counter = 0;
  for (int N = 1; N <= max_N; ++N) {
    // one state and vector set per draw, shared by all permutations
    for (int draw = 0; draw < draws; ++draw) {
      const std::uint64_t s = derive_seed(seed, counter++);
      Rng rng(s);
      const QuasiFreeState st = quasifree_from_symbol(HermitianMatrix(random_symbol(rng, modes)));
      std::vector<CVector> psi;
      for (int q = 0; q < 2 * N; ++q) psi.push_back(random_cvector(rng, modes));
      const TwoPointFn tp = symbol_two_point(st.symbol, psi, N);
      Permutation pi(2 * N);
      std::iota(pi.begin(), pi.end(), 0);
      long idx = 0;
      do {
        WickReport r;
        r.N1 = r.N2 = N;
        r.perm_index = idx++;
        r.draw = draw;
        r.seed = s;
        r.expect = expect_monomial(st, MonomialSpec{N, N, psi, pi});
        r.wick = wick_determinant(tp, N, pi);
        r.abs_err = std::abs(r.expect - r.wick);
        r.pass = close_rel_abs(r.expect, r.wick, 1e-10, 1e-12);
        out.push_back(r);
      } while (std::next_permutation(pi.begin(), pi.end()));
    }
  }
  // gauge invariance: N1 != N2 monomials vanish
  for (int N1 = 0; N1 <= max_N; ++N1)
    for (int N2 = 0; N2 <= max_N; ++N2) {
      if (N1 == N2) continue;
      for (int draw = 0; draw < draws; ++draw) {
        const std::uint64_t s = derive_seed(seed, counter++);
        Rng rng(s);
        const QuasiFreeState st = quasifree_from_symbol(HermitianMatrix(random_symbol(rng, modes)));
        std::vector<CVector> psi;
        for (int q = 0; q < N1 + N2; ++q) psi.push_back(random_cvector(rng, modes));
        Permutation pi(N1 + N2);
        std::iota(pi.begin(), pi.end(), 0);
        std::shuffle(pi.begin(), pi.end(), rng);
        WickReport r;
        r.N1 = N1;
        r.N2 = N2;
        r.draw = draw;
        r.seed = s;
        r.expect = expect_monomial(st, MonomialSpec{N1, N2, psi, pi});
        r.wick = 0.0;
        r.abs_err = std::abs(r.expect);
        r.pass = r.abs_err <= 1e-12;
        out.push_back(r);
      }
    }
  return out;
}

GeneratorConfig representation_generator() {
  GeneratorConfig g;
  g.max_d = 2;
  g.max_m = 2;
  g.max_N = 2;
  g.n_values = {2, 4};
  g.betas = {0.5, 1.0};
  g.max_scale = 4.0;
  return g;
}

RepresentationReport evaluate_representation(long id, std::uint64_t seed, const GeneratorConfig& cfg, double eta) {
  RepresentationReport r;
  r.id = id;
  r.seed = seed;
  try {
    const BoundInstance inst = generate_instance(cfg, seed);
    r.d = inst.d();
    r.m = inst.m();
    r.N = inst.N();
    r.n = inst.torus.n();
    r.beta = inst.torus.beta();
    const RepresentationResult rr = determinant_representation(inst, eta);
    r.modes = rr.modes;
    r.eta_used = rr.eta_used;
    r.clamped = rr.clamped;
    r.rep = rr.inner_product_form;
    r.trace = rr.trace_form;
    const SpectralData h = eig_hermitian(inst.H);
    const CMatrix a = covariance_matrix(inst, h, rr.eta_used);
    r.det = a.determinant();
    // relative, floored at 1e-6 of the roundoff scales of both sides
    // (Hadamard product for the determinant, prod ||x_q|| <= bound for the
    // Fock-space form) so exact zeros compare at machine level
    const double floor =
        1e-6 * std::max(hadamard_scale(a), determinant_bound(inst, h)) + std::numeric_limits<double>::min();
    r.rel_err = std::abs(r.rep - r.det) / std::max(std::abs(r.det), floor);
    r.trace_rel_err = std::abs(r.trace - r.rep) / std::max(std::abs(r.rep), floor);
    r.pass = r.rel_err <= 1e-8 && r.trace_rel_err <= 1e-8;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

std::vector<RepresentationReport> representation_suite(long count, const GeneratorConfig& cfg, std::uint64_t seed,
                                                       double eta, int jobs) {
  cfg.validate();
  std::vector<RepresentationReport> out(count);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long i = 0; i < count; ++i) out[i] = evaluate_representation(i, derive_seed(seed, i), cfg, eta);
  return out;
}

}  // namespace fermicov
