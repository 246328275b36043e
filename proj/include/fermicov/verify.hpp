#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fermicov/car_fock.hpp"
#include "fermicov/covariance.hpp"
#include "fermicov/modular.hpp"
#include "fermicov/ordering.hpp"
#include "fermicov/random.hpp"

namespace fermicov {

struct BoundReport {
  long id = 0;
  std::uint64_t seed = 0;
  int d = 0, m = 0, N = 0, n = 0;
  double beta = 0.0;
  cplx det;
  double det_abs = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool pass = false;
  double seconds = 0.0;
  std::string error;  // non-empty if the instance threw
};

/// pass iff slack >= -1e-10 max(1, bound)
bool bound_passes(double slack, double bound);

struct GeneratorConfig {
  enum class MSource { Mixed, RandomPSD, BK };
  enum class ChiSource { Mixed, One, Indicator, Gaussian };

  int max_d = 3;
  int max_m = 3;
  int max_N = 3;
  std::vector<int> n_values{2, 4, 8};
  std::vector<double> betas{0.5, 1.0, 2.0};
  /// eigenvalue magnitudes are log-uniform up to max_scale * beta^{-1} n
  double max_scale = 1e3;
  MSource m_source = MSource::Mixed;
  ChiSource chi_source = ChiSource::Mixed;
  /// probability of an exactly vanishing cutoff
  double zero_chi_rate = 0.02;

  /// Throws DomainError on inconsistent settings.
  void validate() const;
};

BoundInstance generate_instance(const GeneratorConfig& cfg, std::uint64_t seed);

BoundReport evaluate_instance(long id, std::uint64_t seed, const GeneratorConfig& cfg);

/// Seeded suite; instance i uses derive_seed(seed, i). Results are ordered
/// by id. jobs <= 0 uses the OpenMP default; parallel = false runs the
/// serial reference loop.
std::vector<BoundReport> bound_check_suite(long count, const GeneratorConfig& cfg, std::uint64_t seed, int jobs = 0,
                                           bool parallel = true);

struct SharpnessReport {
  double epsilon = 0.0;
  double beta = 0.0;
  double lambda = 0.0;
  int n = 0;
  int N = 0;
  double g0 = 0.0;  // g_lambda(0)
  double det_abs = 0.0;
  double lower_bound = 0.0;   // (1 - eps)^{2N}
  double closed_form = 0.0;   // (1 - x)^{-N} (1 + |1 - x|^{-n})^{-N}
  double per_factor_bound = 1.0;
  double rel_error = 0.0;
  bool found = false;
  bool pass = false;
  std::string note;
};

/// (1 - n^{-1} beta lambda)^{-N} (1 + |1 - n^{-1} beta lambda|^{-n})^{-N}
double sharpness_closed_form(double lambda, const DiscreteTorus& torus, int N);

/// H = lambda 1 on C^N, all alpha = 0, M = [1], phi_k = phi_{N+k} = e_k.
BoundInstance sharpness_instance(double lambda, const DiscreteTorus& torus, int N);

struct SharpParameters {
  bool found = false;
  double lambda = 0.0;
  int n = 0;
  double g0 = 0.0;
};

/// For n = 2, 4, 8, ... the largest g_lambda(0) over lambda < 0 sits at
/// 1 - n^{-1} beta lambda = (n - 1)^{1/n}; the first n where it reaches
/// 1 - eps is kept and lambda is bisected on [lambda*, 0] (g monotone there).
SharpParameters find_sharp_parameters(double epsilon, double beta, int max_n = 1 << 20);

std::vector<SharpnessReport> sharpness_sweep(double epsilon, double beta, const std::vector<int>& N_list);

struct UniversalBracket {
  double lower = 0.0;
  double upper = 1.0;
  double epsilon = 0.0;
  long bound_count = 0;
  long bound_failures = 0;
  double min_slack = 0.0;
  bool pass = false;
  std::string note;
};

/// lower = max |det|^{1/(2N)} / per-factor bound over sharpness reports;
/// upper = 1 as long as no bound report failed. pass iff lower >= 1 - eps - 1e-6
/// and there are no bound failures.
UniversalBracket universal_bound_estimate(const std::vector<BoundReport>& bounds,
                                          const std::vector<SharpnessReport>& sharp);

/// One (N, pi, draw) comparison of the Fock-space trace against the
/// two-point determinant, or one N1 != N2 vanishing check (wick = 0).
struct WickReport {
  int N1 = 0, N2 = 0;
  long perm_index = 0;
  int draw = 0;
  std::uint64_t seed = 0;
  cplx expect;
  cplx wick;
  double abs_err = 0.0;
  bool pass = false;
};

/// |a - b| <= rel max(|a|, |b|) or |a - b| <= abs
bool close_rel_abs(cplx a, cplx b, double rel, double abs);

/// All permutations of 2N slots for N = 1..max_N, `draws` random (S, Psi)
/// per permutation at `modes` modes, plus N1 != N2 monomials up to max_N.
std::vector<WickReport> wick_suite(int max_N, int modes, int draws, std::uint64_t seed);

struct RepresentationReport {
  long id = 0;
  std::uint64_t seed = 0;
  int d = 0, m = 0, N = 0, n = 0, modes = 0;
  double beta = 0.0;
  double eta_used = 0.0;
  bool clamped = false;
  cplx det;
  cplx rep;
  cplx trace;
  double rel_err = 0.0;
  double trace_rel_err = 0.0;
  bool pass = false;
  std::string error;
};

/// Small instances for the Fock-space representation (D = d rank(M) <= 4 by default).
GeneratorConfig representation_generator();

/// determinant_representation(inst, eta) against covariance_det(inst, eta_used):
/// equal at any finite eta. pass iff both forms agree with it to 1e-8 relative.
RepresentationReport evaluate_representation(long id, std::uint64_t seed, const GeneratorConfig& cfg, double eta);
std::vector<RepresentationReport> representation_suite(long count, const GeneratorConfig& cfg, std::uint64_t seed,
                                                       double eta, int jobs = 0);

}  // namespace fermicov
