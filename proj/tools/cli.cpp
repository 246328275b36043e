#include "cli.hpp"

#include <CLI11.hpp>
#include <yaml-cpp/yaml.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <json.hpp>
#include <optional>
#include <set>
#include <sstream>
#include <unistd.h>

#include "fermicov/verify.hpp"

namespace fermicov::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// settings

struct RawPoint {
  double alpha = 0.0;
  CVector phi;
  int color = 1;  // 1-based
};

struct GeneratorOverrides {
  std::optional<int> max_d, max_m, max_N;
  std::optional<std::vector<int>> n_values;
  std::optional<std::vector<double>> betas;
  std::optional<double> max_scale;
  std::optional<std::string> m_source, chi_source;

  GeneratorConfig apply(GeneratorConfig g) const {
    if (max_d) g.max_d = *max_d;
    if (max_m) g.max_m = *max_m;
    if (max_N) g.max_N = *max_N;
    if (n_values) g.n_values = *n_values;
    if (betas) g.betas = *betas;
    if (max_scale) g.max_scale = *max_scale;
    if (m_source) {
      if (*m_source == "mixed") g.m_source = GeneratorConfig::MSource::Mixed;
      else if (*m_source == "psd") g.m_source = GeneratorConfig::MSource::RandomPSD;
      else if (*m_source == "bk") g.m_source = GeneratorConfig::MSource::BK;
      else throw UsageError("m_source must be one of mixed, psd, bk; got '" + *m_source + "'");
    }
    if (chi_source) {
      if (*chi_source == "mixed") g.chi_source = GeneratorConfig::ChiSource::Mixed;
      else if (*chi_source == "one") g.chi_source = GeneratorConfig::ChiSource::One;
      else if (*chi_source == "indicator") g.chi_source = GeneratorConfig::ChiSource::Indicator;
      else if (*chi_source == "gaussian") g.chi_source = GeneratorConfig::ChiSource::Gaussian;
      else throw UsageError("chi_source must be one of mixed, one, indicator, gaussian; got '" + *chi_source + "'");
    }
    try {
      g.validate();
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    return g;
  }
};

struct Settings {
  std::string out, summary;
  int jobs = 0;
  std::uint64_t seed = 42;
  double beta = 1.0;
  int n = 8;
  std::string lambda = "0";
  std::optional<double> eta;
  bool force_finite_eta = false;
  std::optional<long> count;
  GeneratorOverrides gen;
  int max_N = 3, modes = 4, draws = 10;
  std::vector<double> etas{8.0};
  double t = 1.0;
  int bk_m = 4;
  std::vector<double> epsilons{0.1};
  std::vector<int> N_list{1, 2, 4, 8};
  std::vector<int> n_list{4, 8, 16, 32, 64};
  std::optional<CMatrix> H;
  std::optional<CutoffSpec> chi;
  std::optional<RMatrix> M;
  std::optional<TreeGraph> tree;
  std::vector<RawPoint> points;
};

// ---------------------------------------------------------------------------
// YAML config

[[noreturn]] void config_error(const YAML::Node& node, const std::string& field, const std::string& msg) {
  std::ostringstream os;
  os << "config";
  if (node.IsDefined() && node.Mark().line >= 0) os << " line " << node.Mark().line + 1;
  os << ", field '" << field << "': " << msg;
  throw UsageError(os.str());
}

template <class T>
T as(const YAML::Node& node, const std::string& field) {
  T v{};
  try {
    v = node.as<T>();
  } catch (const YAML::BadConversion&) {
    config_error(node, field, "wrong type");
  }
  if constexpr (std::is_floating_point_v<T>)
    if (!std::isfinite(v)) config_error(node, field, "must be finite");
  return v;
}

template <class T>
std::vector<T> as_list(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence()) config_error(node, field, "expected a list");
  std::vector<T> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(as<T>(node[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

void check_keys(const YAML::Node& node, const std::string& field, const std::set<std::string>& allowed) {
  if (!node.IsMap()) config_error(node, field, "expected a mapping");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) config_error(kv.first, field.empty() ? key : field + "." + key, "unknown key");
  }
}

RMatrix real_matrix(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence() || node.size() == 0) config_error(node, field, "expected a nonempty list of rows");
  const std::size_t rows = node.size();
  const std::size_t cols = node[0].IsSequence() ? node[0].size() : 0;
  if (cols == 0) config_error(node, field, "rows must be nonempty lists");
  RMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rf = field + "[" + std::to_string(i) + "]";
    if (!node[i].IsSequence() || node[i].size() != cols) config_error(node[i], rf, "ragged matrix row");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = as<double>(node[i][j], rf + "[" + std::to_string(j) + "]");
  }
  return m;
}

CVector complex_vector(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence() || node.size() == 0) config_error(node, field, "expected a nonempty list");
  CVector v(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (node[i].IsSequence()) {
      if (node[i].size() != 2) config_error(node[i], f, "complex entries are [re, im]");
      v(i) = cplx(as<double>(node[i][0], f), as<double>(node[i][1], f));
    } else {
      v(i) = as<double>(node[i], f);
    }
  }
  return v;
}

CutoffSpec parse_cutoff_node(const YAML::Node& node) {
  check_keys(node, "cutoff", {"type", "lo", "hi", "center", "width", "points"});
  if (!node["type"]) config_error(node, "cutoff.type", "missing");
  const std::string type = as<std::string>(node["type"], "cutoff.type");
  try {
    if (type == "one") return CutoffSpec::one();
    if (type == "indicator") return CutoffSpec::indicator(as<double>(node["lo"], "cutoff.lo"), as<double>(node["hi"], "cutoff.hi"));
    if (type == "gaussian")
      return CutoffSpec::gaussian(as<double>(node["center"], "cutoff.center"), as<double>(node["width"], "cutoff.width"));
    if (type == "table") {
      const RMatrix p = real_matrix(node["points"], "cutoff.points");
      if (p.cols() != 2) config_error(node["points"], "cutoff.points", "rows are [lambda, chi]");
      std::vector<std::pair<double, double>> pts;
      for (Eigen::Index i = 0; i < p.rows(); ++i) pts.emplace_back(p(i, 0), p(i, 1));
      return CutoffSpec::table(pts);
    }
  } catch (const DomainError& e) {
    config_error(node, "cutoff", e.what());
  }
  config_error(node["type"], "cutoff.type", "must be one of one, indicator, gaussian, table");
}

TreeGraph parse_tree_node(const YAML::Node& node, const std::string& field) {
  check_keys(node, field, {"vertices", "edges"});
  TreeGraph g;
  g.vertices = as<int>(node["vertices"], field + ".vertices");
  if (g.vertices < 1) config_error(node["vertices"], field + ".vertices", "must be >= 1");
  const YAML::Node edges = node["edges"];
  if (edges && !edges.IsSequence()) config_error(edges, field + ".edges", "expected a list of [u, v, weight]");
  if (edges)
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string f = field + ".edges[" + std::to_string(i) + "]";
      if (!edges[i].IsSequence() || edges[i].size() != 3) config_error(edges[i], f, "expected [u, v, weight]");
      const int u = as<int>(edges[i][0], f), v = as<int>(edges[i][1], f);
      const double w = as<double>(edges[i][2], f);
      if (u < 1 || v < 1 || u > g.vertices || v > g.vertices) config_error(edges[i], f, "vertex out of range (1-based)");
      if (!(w >= 0.0 && w <= 1.0)) config_error(edges[i], f, "weight must lie in [0, 1]");
      g.edges.push_back({u - 1, v - 1, w});
    }
  return g;
}

void load_config(const std::string& path, Settings& s) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw UsageError("config: cannot read '" + path + "'");
  } catch (const YAML::ParserException& e) {
    throw UsageError("config line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (root.IsNull()) return;
  check_keys(root, "", {"seed", "jobs", "out", "summary", "torus", "kernel", "hamiltonian", "cutoff", "m_matrix",
                        "points", "count", "generator", "wick", "etas", "bk", "sharpness", "gram"});
  if (root["seed"]) s.seed = as<std::uint64_t>(root["seed"], "seed");
  if (root["jobs"]) s.jobs = as<int>(root["jobs"], "jobs");
  if (root["out"]) s.out = as<std::string>(root["out"], "out");
  if (root["summary"]) s.summary = as<std::string>(root["summary"], "summary");
  if (root["count"]) s.count = as<long>(root["count"], "count");
  if (const auto t = root["torus"]) {
    check_keys(t, "torus", {"beta", "n"});
    if (t["beta"]) s.beta = as<double>(t["beta"], "torus.beta");
    if (t["n"]) s.n = as<int>(t["n"], "torus.n");
  }
  if (const auto k = root["kernel"]) {
    check_keys(k, "kernel", {"lambda", "eta", "force_finite_eta"});
    if (k["lambda"]) s.lambda = as<std::string>(k["lambda"], "kernel.lambda");
    if (k["eta"]) s.eta = as<double>(k["eta"], "kernel.eta");
    if (k["force_finite_eta"]) s.force_finite_eta = as<bool>(k["force_finite_eta"], "kernel.force_finite_eta");
  }
  if (const auto h = root["hamiltonian"]) {
    check_keys(h, "hamiltonian", {"diagonal", "real", "imag", "random"});
    if (h["diagonal"]) {
      const auto d = as_list<double>(h["diagonal"], "hamiltonian.diagonal");
      if (d.empty()) config_error(h["diagonal"], "hamiltonian.diagonal", "must be nonempty");
      s.H = CMatrix(Eigen::Map<const RVector>(d.data(), d.size()).cast<cplx>().asDiagonal());
    } else if (h["real"]) {
      const RMatrix re = real_matrix(h["real"], "hamiltonian.real");
      CMatrix m = re.cast<cplx>();
      if (h["imag"]) {
        const RMatrix im = real_matrix(h["imag"], "hamiltonian.imag");
        if (im.rows() != re.rows() || im.cols() != re.cols())
          config_error(h["imag"], "hamiltonian.imag", "shape differs from hamiltonian.real");
        m += cplx(0, 1) * im.cast<cplx>();
      }
      s.H = m;
    } else if (h["random"]) {
      const auto r = h["random"];
      check_keys(r, "hamiltonian.random", {"dim", "scale", "seed"});
      const int dim = as<int>(r["dim"], "hamiltonian.random.dim");
      if (dim < 1) config_error(r["dim"], "hamiltonian.random.dim", "must be >= 1");
      const double scale = r["scale"] ? as<double>(r["scale"], "hamiltonian.random.scale") : 1.0;
      Rng rng(r["seed"] ? as<std::uint64_t>(r["seed"], "hamiltonian.random.seed") : 1);
      s.H = scale * random_gue(rng, dim);
    } else {
      config_error(h, "hamiltonian", "give one of diagonal, real(+imag), random");
    }
  }
  if (root["cutoff"]) s.chi = parse_cutoff_node(root["cutoff"]);
  if (const auto m = root["m_matrix"]) {
    check_keys(m, "m_matrix", {"explicit", "random_psd", "tree", "t"});
    if (m["explicit"]) {
      s.M = real_matrix(m["explicit"], "m_matrix.explicit");
    } else if (m["random_psd"]) {
      const auto r = m["random_psd"];
      check_keys(r, "m_matrix.random_psd", {"m", "rank", "seed"});
      const int mm = as<int>(r["m"], "m_matrix.random_psd.m");
      const int rank = r["rank"] ? as<int>(r["rank"], "m_matrix.random_psd.rank") : mm;
      if (mm < 1 || rank < 1 || rank > mm) config_error(r, "m_matrix.random_psd", "need 1 <= rank <= m");
      Rng rng(r["seed"] ? as<std::uint64_t>(r["seed"], "m_matrix.random_psd.seed") : 1);
      s.M = random_psd(rng, mm, rank);
    } else if (m["tree"]) {
      s.tree = parse_tree_node(m["tree"], "m_matrix.tree");
      if (m["t"]) s.t = as<double>(m["t"], "m_matrix.t");
    }
  }
  if (const auto p = root["points"]) {
    if (!p.IsSequence()) config_error(p, "points", "expected a list");
    for (std::size_t i = 0; i < p.size(); ++i) {
      const std::string f = "points[" + std::to_string(i) + "]";
      check_keys(p[i], f, {"alpha", "phi", "color"});
      RawPoint rp;
      rp.alpha = as<double>(p[i]["alpha"], f + ".alpha");
      rp.phi = complex_vector(p[i]["phi"], f + ".phi");
      if (p[i]["color"]) rp.color = as<int>(p[i]["color"], f + ".color");
      s.points.push_back(rp);
    }
  }
  if (const auto g = root["generator"]) {
    check_keys(g, "generator", {"max_d", "max_m", "max_N", "n_values", "betas", "max_scale", "m_source", "chi_source"});
    if (g["max_d"]) s.gen.max_d = as<int>(g["max_d"], "generator.max_d");
    if (g["max_m"]) s.gen.max_m = as<int>(g["max_m"], "generator.max_m");
    if (g["max_N"]) s.gen.max_N = as<int>(g["max_N"], "generator.max_N");
    if (g["n_values"]) s.gen.n_values = as_list<int>(g["n_values"], "generator.n_values");
    if (g["betas"]) s.gen.betas = as_list<double>(g["betas"], "generator.betas");
    if (g["max_scale"]) s.gen.max_scale = as<double>(g["max_scale"], "generator.max_scale");
    if (g["m_source"]) s.gen.m_source = as<std::string>(g["m_source"], "generator.m_source");
    if (g["chi_source"]) s.gen.chi_source = as<std::string>(g["chi_source"], "generator.chi_source");
  }
  if (const auto w = root["wick"]) {
    check_keys(w, "wick", {"max_N", "modes", "draws"});
    if (w["max_N"]) s.max_N = as<int>(w["max_N"], "wick.max_N");
    if (w["modes"]) s.modes = as<int>(w["modes"], "wick.modes");
    if (w["draws"]) s.draws = as<int>(w["draws"], "wick.draws");
  }
  if (root["etas"]) s.etas = as_list<double>(root["etas"], "etas");
  if (const auto b = root["bk"]) {
    check_keys(b, "bk", {"m", "t"});
    if (b["m"]) s.bk_m = as<int>(b["m"], "bk.m");
    if (b["t"]) s.t = as<double>(b["t"], "bk.t");
  }
  if (const auto sh = root["sharpness"]) {
    check_keys(sh, "sharpness", {"epsilon", "N"});
    if (sh["epsilon"]) s.epsilons = sh["epsilon"].IsSequence() ? as_list<double>(sh["epsilon"], "sharpness.epsilon")
                                                                : std::vector<double>{as<double>(sh["epsilon"], "sharpness.epsilon")};
    if (sh["N"]) s.N_list = as_list<int>(sh["N"], "sharpness.N");
  }
  if (const auto g = root["gram"]) {
    check_keys(g, "gram", {"n"});
    if (g["n"]) s.n_list = as_list<int>(g["n"], "gram.n");
  }
}

// ---------------------------------------------------------------------------
// output

void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, target);
}

struct Report {
  std::ostringstream csv;
  json summary;
  std::vector<std::string> columns;

  explicit Report(std::vector<std::string> cols) : columns(std::move(cols)) {
    csv << "# fermicov-schema v1\n";
    for (std::size_t i = 0; i < columns.size(); ++i) csv << (i ? "," : "") << columns[i];
    csv << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns.size()) throw std::logic_error("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) csv << (i ? "," : "") << cells[i];
    csv << "\n";
  }
};

std::string b(bool v) { return v ? "1" : "0"; }

void emit(const Settings& s, Report& r) {
  const std::string text = r.summary.dump(2) + "\n";
  if (s.out.empty()) {
    std::cout << r.csv.str();
  } else {
    write_atomic(s.out, r.csv.str());
  }
  if (!s.summary.empty())
    write_atomic(s.summary, text);
  else if (!s.out.empty())
    write_atomic(s.out + ".json", text);
  else
    std::cerr << text;
}

// ---------------------------------------------------------------------------
// instances from settings

DiscreteTorus torus_of(const Settings& s) {
  try {
    return DiscreteTorus(s.beta, s.n);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

HermitianMatrix hamiltonian_of(const Settings& s) {
  if (!s.H) return HermitianMatrix(CMatrix::Zero(1, 1));
  try {
    return HermitianMatrix(*s.H);
  } catch (const DomainError& e) {
    throw UsageError(std::string("hamiltonian: ") + e.what());
  }
}

RMatrix m_of(const Settings& s) {
  if (s.M) return *s.M;
  if (s.tree) return bk_matrix(*s.tree, s.t);
  return RMatrix::Identity(1, 1);
}

/// Instance from explicit config points, or a seeded random one.
BoundInstance instance_of(const Settings& s, const GeneratorConfig& gen) {
  if (s.points.empty()) return generate_instance(gen, s.seed);
  const DiscreteTorus torus = torus_of(s);
  BoundInstance inst{hamiltonian_of(s), torus, s.chi.value_or(CutoffSpec::one()), m_of(s), {}};
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto& p = s.points[i];
    TorusPoint a;
    try {
      a = torus.locate(p.alpha);
    } catch (const DomainError& e) {
      throw UsageError("points[" + std::to_string(i) + "].alpha: " + e.what());
    }
    inst.points.push_back({a, p.phi, p.color - 1});
  }
  try {
    inst.validate();
  } catch (const DomainError& e) {
    throw UsageError(std::string("instance: ") + e.what());
  }
  return inst;
}

double wall_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_kernel(const Settings& s) {
  const DiscreteTorus torus = torus_of(s);
  double lambda = 0.0;
  if (s.lambda == "singular") {
    lambda = torus.inverse_spacing();
  } else {
    try {
      std::size_t pos = 0;
      lambda = std::stod(s.lambda, &pos);
      if (pos != s.lambda.size() || !std::isfinite(lambda)) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw UsageError("--lambda must be a number or 'singular', got '" + s.lambda + "'");
    }
  }
  if (s.force_finite_eta && !s.eta) throw UsageError("--force-finite-eta needs --eta");
  if (s.eta && !(*s.eta > 0.0)) throw UsageError("--eta must be positive");
  const bool singular = is_singular_eigenvalue(lambda, torus);
  std::optional<double> eta;
  if (s.eta && (s.force_finite_eta || !singular)) eta = s.eta;
  const KernelEval k = kernel_g(lambda, torus, eta);
  const double tol = 1e-9 * torus.inverse_spacing();
  const bool checked = !(singular && eta);
  const double res = k.residual();
  const bool pass = !checked || res <= tol;

  Report r({"index", "alpha", "g"});
  for (int i = 1; i <= torus.size(); ++i) r.row({std::to_string(i), num(torus.value({i})), num(k.values(i - 1))});
  r.summary = {{"suite", "kernel"},
               {"count", torus.size()},
               {"failures", pass ? json::array() : json::array({"residual"})},
               {"beta", torus.beta()},
               {"n", torus.n()},
               {"lambda", lambda},
               {"branch", singular ? (eta ? "finite-eta" : "closed-limit") : "regular"},
               {"residual", res},
               {"residual_tol", tol},
               {"residual_checked", checked}};
  emit(s, r);
  return pass ? 0 : 1;
}

std::vector<std::string> bound_columns() {
  return {"instance_id", "seed", "d", "m", "N", "n", "beta", "det_re", "det_im", "det_abs", "bound", "slack", "pass"};
}

std::vector<std::string> bound_cells(const BoundReport& x) {
  return {std::to_string(x.id), std::to_string(x.seed), std::to_string(x.d), std::to_string(x.m), std::to_string(x.N),
          std::to_string(x.n), num(x.beta), num(x.det.real()), num(x.det.imag()), num(x.det_abs), num(x.bound),
          num(x.slack), b(x.pass)};
}

json bound_summary(const std::string& suite, const std::vector<BoundReport>& reps, double wall) {
  json fails = json::array();
  double min_slack = reps.empty() ? 0.0 : reps.front().slack;
  json errors = json::array();
  for (const auto& x : reps) {
    if (!x.pass) fails.push_back(x.seed);
    if (!x.error.empty()) errors.push_back({{"instance_id", x.id}, {"error", x.error}});
    min_slack = std::min(min_slack, x.slack);
  }
  return {{"suite", suite}, {"count", reps.size()}, {"failures", fails}, {"min_slack", min_slack},
          {"wall_time_s", wall}, {"errors", errors}};
}

int cmd_covariance_det(const Settings& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const GeneratorConfig gen = s.gen.apply(GeneratorConfig{});
  const BoundInstance inst = instance_of(s, gen);
  BoundReport x;
  x.seed = s.points.empty() ? s.seed : 0;
  x.d = inst.d();
  x.m = inst.m();
  x.N = inst.N();
  x.n = inst.torus.n();
  x.beta = inst.torus.beta();
  const SpectralData h = eig_hermitian(inst.H);
  x.det = covariance_det(inst, h, s.eta);
  x.det_abs = std::abs(x.det);
  x.bound = determinant_bound(inst, h);
  x.slack = x.bound - x.det_abs;
  x.pass = bound_passes(x.slack, x.bound);
  Report r(bound_columns());
  r.row(bound_cells(x));
  r.summary = bound_summary("covariance-det", {x}, wall_since(t0));
  emit(s, r);
  return x.pass ? 0 : 1;
}

int cmd_bound_check(const Settings& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const GeneratorConfig gen = s.gen.apply(GeneratorConfig{});
  const long count = s.count.value_or(1000);
  if (count < 0) throw UsageError("--count must be >= 0");
  const auto reps = bound_check_suite(count, gen, s.seed, s.jobs);
  Report r(bound_columns());
  bool ok = true;
  for (const auto& x : reps) {
    r.row(bound_cells(x));
    ok = ok && x.pass;
  }
  r.summary = bound_summary("bound-check", reps, wall_since(t0));
  emit(s, r);
  return ok ? 0 : 1;
}

int cmd_wick(const Settings& s) {
  const auto t0 = std::chrono::steady_clock::now();
  if (s.max_N < 1 || s.max_N > 4) throw UsageError("--max-N must lie in 1..4");
  if (s.modes < 1 || s.modes > fock_cap()) throw UsageError("--modes must lie in 1..Fock cap");
  if (s.draws < 1) throw UsageError("--draws must be >= 1");
  const auto reps = wick_suite(s.max_N, s.modes, s.draws, s.seed);
  Report r({"N1", "N2", "perm_index", "draw", "seed", "expect_re", "expect_im", "wick_re", "wick_im", "abs_err", "pass"});
  std::set<std::uint64_t> failed;
  double worst = 0.0;
  for (const auto& x : reps) {
    r.row({std::to_string(x.N1), std::to_string(x.N2), std::to_string(x.perm_index), std::to_string(x.draw),
           std::to_string(x.seed), num(x.expect.real()), num(x.expect.imag()), num(x.wick.real()), num(x.wick.imag()),
           num(x.abs_err), b(x.pass)});
    if (!x.pass) failed.insert(x.seed);
    worst = std::max(worst, x.abs_err);
  }
  r.summary = {{"suite", "wick-verify"}, {"count", reps.size()}, {"failures", failed},
               {"max_abs_err", worst}, {"wall_time_s", wall_since(t0)}};
  emit(s, r);
  return failed.empty() ? 0 : 1;
}

int cmd_modular(const Settings& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const GeneratorConfig gen = s.gen.apply(representation_generator());
  const long count = s.count.value_or(50);
  if (count < 0) throw UsageError("--count must be >= 0");
  for (double e : s.etas)
    if (!(e > 0.0)) throw UsageError("every eta must be positive");
  Report r({"instance_id", "seed", "d", "m", "N", "n", "beta", "modes", "eta", "eta_used", "clamped", "det_re", "det_im",
            "rep_re", "rep_im", "trace_re", "trace_im", "rel_err", "trace_rel_err", "pass"});
  std::set<std::uint64_t> failed;
  json errors = json::array();
  double worst = 0.0;
  long total = 0;
  for (double eta : s.etas) {
    const auto reps = representation_suite(count, gen, s.seed, eta, s.jobs);
    for (const auto& x : reps) {
      ++total;
      r.row({std::to_string(x.id), std::to_string(x.seed), std::to_string(x.d), std::to_string(x.m),
             std::to_string(x.N), std::to_string(x.n), num(x.beta), std::to_string(x.modes), num(eta), num(x.eta_used),
             b(x.clamped), num(x.det.real()), num(x.det.imag()), num(x.rep.real()), num(x.rep.imag()),
             num(x.trace.real()), num(x.trace.imag()), num(x.rel_err), num(x.trace_rel_err), b(x.pass)});
      if (!x.pass) failed.insert(x.seed);
      if (!x.error.empty()) errors.push_back({{"instance_id", x.id}, {"eta", eta}, {"error", x.error}});
      worst = std::max(worst, x.rel_err);
    }
  }
  r.summary = {{"suite", "modular-verify"}, {"count", total}, {"failures", failed}, {"max_rel_err", worst},
               {"wall_time_s", wall_since(t0)}, {"errors", errors}};
  emit(s, r);
  return failed.empty() ? 0 : 1;
}

int cmd_bk(const Settings& s) {
  const auto t0 = std::chrono::steady_clock::now();
  TreeGraph g;
  if (s.tree) {
    g = *s.tree;
  } else {
    if (s.bk_m < 1) throw UsageError("--m must be >= 1");
    Rng rng(s.seed);
    g = random_tree(rng, s.bk_m);
  }
  if (!(s.t >= 0.0 && s.t <= 1.0)) throw UsageError("--t must lie in [0, 1]");
  const RMatrix M = bk_matrix(g, s.t);
  Report r({"k", "l", "value"});
  for (Eigen::Index k = 0; k < M.rows(); ++k)
    for (Eigen::Index l = 0; l < M.cols(); ++l) r.row({std::to_string(k + 1), std::to_string(l + 1), num(M(k, l))});
  Eigen::SelfAdjointEigenSolver<RMatrix> es(M, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  const bool diag_ok = (M.diagonal().array() == s.t).all();
  const bool pass = min_eig >= -1e-10 && diag_ok && (M - M.transpose()).cwiseAbs().maxCoeff() == 0.0;
  json edges = json::array();
  for (const auto& e : g.edges) edges.push_back({e.u + 1, e.v + 1, e.weight});
  r.summary = {{"suite", "bk-matrix"}, {"count", M.size()}, {"failures", pass ? json::array() : json::array({s.seed})},
               {"min_eigenvalue", min_eig}, {"diagonal_equals_t", diag_ok}, {"is_tree", g.is_tree()},
               {"t", s.t}, {"edges", edges}, {"wall_time_s", wall_since(t0)}};
  emit(s, r);
  return pass ? 0 : 1;
}

std::vector<SharpnessReport> run_sharpness(const Settings& s) {
  std::vector<SharpnessReport> all;
  for (double eps : s.epsilons) {
    if (!(eps > 0.0 && eps < 1.0)) throw UsageError("--epsilon values must lie in (0, 1)");
    for (int N : s.N_list)
      if (N < 1) throw UsageError("--N-list entries must be >= 1");
    if (!(s.beta > 0.0)) throw UsageError("--beta must be positive");
    const auto reps = sharpness_sweep(eps, s.beta, s.N_list);
    all.insert(all.end(), reps.begin(), reps.end());
  }
  return all;
}

int cmd_sharpness(const Settings& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto reps = run_sharpness(s);
  Report r({"epsilon", "beta", "lambda", "n", "N", "g0", "det_abs", "lower_bound", "closed_form", "rel_error", "found",
            "pass"});
  json fails = json::array();
  for (const auto& x : reps) {
    r.row({num(x.epsilon), num(x.beta), num(x.lambda), std::to_string(x.n), std::to_string(x.N), num(x.g0),
           num(x.det_abs), num(x.lower_bound), num(x.closed_form), num(x.rel_error), b(x.found), b(x.pass)});
    if (!x.pass) fails.push_back({{"epsilon", x.epsilon}, {"N", x.N}});
  }
  r.summary = {{"suite", "sharpness"}, {"count", reps.size()}, {"failures", fails}, {"wall_time_s", wall_since(t0)}};
  emit(s, r);
  return fails.empty() ? 0 : 1;
}

int cmd_universal(const Settings& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const GeneratorConfig gen = s.gen.apply(GeneratorConfig{});
  const long count = s.count.value_or(1000);
  if (count < 0) throw UsageError("--count must be >= 0");
  const auto bounds = bound_check_suite(count, gen, s.seed, s.jobs);
  Report r({"epsilon", "lower", "upper", "bound_count", "bound_failures", "min_slack", "pass"});
  json fails = json::array();
  for (const auto& x : bounds)
    if (!x.pass) fails.push_back(x.seed);
  std::vector<std::pair<double, double>> eps_lower;
  bool ok = fails.empty();
  for (double eps : s.epsilons) {
    Settings one = s;
    one.epsilons = {eps};
    const UniversalBracket br = universal_bound_estimate(bounds, run_sharpness(one));
    r.row({num(eps), num(br.lower), num(br.upper), std::to_string(br.bound_count), std::to_string(br.bound_failures),
           num(br.min_slack), b(br.pass)});
    ok = ok && br.pass;
    eps_lower.emplace_back(eps, br.lower);
  }
  // shrinking epsilon never lowers the lower estimate
  bool monotone = true;
  for (const auto& a : eps_lower)
    for (const auto& c : eps_lower)
      if (c.first < a.first && c.second < a.second) monotone = false;
  r.summary = {{"suite", "universal"}, {"count", bounds.size()}, {"failures", fails}, {"monotone_in_epsilon", monotone},
               {"note", "numerical bracket from finite sweeps; evidence, not a certificate"},
               {"wall_time_s", wall_since(t0)}};
  emit(s, r);
  return ok && monotone ? 0 : 1;
}

int cmd_decay(const Settings& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const HermitianMatrix H = hamiltonian_of(s);
  const SpectralData h = eig_hermitian(H);
  const CutoffSpec chi = s.chi.value_or(CutoffSpec::one());
  std::vector<CVector> basis;
  for (int i = 0; i < H.dim(); ++i) {
    CVector e = CVector::Zero(H.dim());
    e(i) = 1.0;
    basis.push_back(e);
  }
  Report r({"beta", "n", "decay"});
  std::vector<double> vals;
  for (int n : {s.n, 2 * s.n}) {
    Settings t = s;
    t.n = n;
    const double v = decay_parameter(h, chi, basis, torus_of(t));
    vals.push_back(v);
    r.row({num(s.beta), std::to_string(n), num(v)});
  }
  r.summary = {{"suite", "decay"}, {"count", vals.size()}, {"failures", json::array()},
               {"note", "finite-n snapshot; no limit over n is taken"},
               {"relative_change_on_doubling", vals[0] > 0 ? std::abs(vals[1] - vals[0]) / vals[0] : 0.0},
               {"wall_time_s", wall_since(t0)}};
  emit(s, r);
  return 0;
}

int cmd_gram(const Settings& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const HermitianMatrix H = hamiltonian_of(s);
  std::vector<DiscreteTorus> tori;
  for (int n : s.n_list) {
    Settings t = s;
    t.n = n;
    tori.push_back(torus_of(t));
  }
  const GramReport g = gram_norm_demo(H, tori);
  Report r({"n", "cov_norm", "embed_norm", "gram_factor"});
  for (const auto& row : g.rows) r.row({std::to_string(row.n), num(row.cov_norm), num(row.embed_norm), num(row.gram_factor)});
  r.summary = {{"suite", "gram"},
               {"count", g.rows.size()},
               {"failures", json::array()},
               {"has_zero_mode", g.has_zero_mode},
               {"cov_norm_exponent", g.cov_exponent},
               {"embed_norm_exponent", g.embed_exponent},
               {"gram_factor_exponent", g.gram_exponent},
               {"wall_time_s", wall_since(t0)}};
  if (!g.has_zero_mode) r.summary["warning"] = "no eigenvalue within 1e-9 of 0; computed anyway";
  emit(s, r);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"fermicov: covariance determinant verification experiments"};
  app.require_subcommand(1);
  Settings s;
  std::string config;

  // flags; each is applied after the config file so flags win
  std::string out, summary, lambda, m_source, chi_source;
  int jobs = 0, n = 0, max_N = 0, modes = 0, draws = 0, bk_m = 0, max_d = 0, max_m = 0, gen_max_N = 0;
  std::uint64_t seed = 0;
  double beta = 0, eta = 0, t = 0, max_scale = 0;
  long count = 0;
  std::vector<double> etas, epsilons, betas, diag;
  std::vector<int> N_list, n_list, n_values;
  std::string chi;
  bool force_finite = false;

  auto add = [&](CLI::App* sub, auto name, auto& var, const std::string& desc) {
    return sub->add_option(name, var, desc);
  };

  struct Sub {
    const char* name;
    const char* desc;
    int (*fn)(const Settings&);
  };
  const Sub subs[] = {
      {"kernel", "tabulate g_lambda on the torus and check its defining equation", cmd_kernel},
      {"covariance-det", "determinant and bound for one instance (config points or seeded random)", cmd_covariance_det},
      {"wick-verify", "generalized Wick formula against Fock-space traces", cmd_wick},
      {"modular-verify", "modular representation against the covariance determinant", cmd_modular},
      {"bound-check", "determinant bound on seeded random instances", cmd_bound_check},
      {"bk-matrix", "Brydges-Kennedy interpolation matrix", cmd_bk},
      {"sharpness", "sharpness witnesses H = lambda 1", cmd_sharpness},
      {"universal", "bracket for the universal determinant bound", cmd_universal},
      {"decay", "finite-n decay parameter", cmd_decay},
      {"gram", "norms of C_H and of the embedded vectors versus n", cmd_gram},
  };
  std::map<std::string, std::map<std::string, CLI::Option*>> flag;
  for (const auto& sd : subs) {
    CLI::App* sub = app.add_subcommand(sd.name, sd.desc);
    auto& f = flag[sd.name];
    f["config"] = add(sub, "--config", config, "YAML config file (flags override it)");
    f["out"] = add(sub, "--out,-o", out, "CSV output path (stdout if absent)");
    f["summary"] = add(sub, "--summary", summary, "JSON summary path (default <out>.json, else stderr)");
    f["jobs"] = add(sub, "--jobs,-j", jobs, "worker threads (default: logical cores)");
    f["seed"] = add(sub, "--seed", seed, "base seed");
    f["beta"] = add(sub, "--beta", beta, "inverse temperature");
    f["n"] = add(sub, "--n", n, "torus order (even)");
    f["eta"] = add(sub, "--eta", eta, "finite eta at the singular eigenvalue");
    f["count"] = add(sub, "--count", count, "number of random instances");
    f["chi"] = add(sub, "--chi", chi, "cutoff: one | indicator:lo:hi | gaussian:center:width");
    f["diag"] = add(sub, "--diag", diag, "diagonal Hamiltonian entries")->delimiter(',');
    f["max-d"] = add(sub, "--max-d", max_d, "generator: max dim(h)");
    f["max-m"] = add(sub, "--max-m", max_m, "generator: max size of M");
    f["max-N-gen"] = add(sub, "--gen-max-N", gen_max_N, "generator: max N");
    f["n-values"] = add(sub, "--n-values", n_values, "generator: torus orders")->delimiter(',');
    f["betas"] = add(sub, "--betas", betas, "generator: inverse temperatures")->delimiter(',');
    f["max-scale"] = add(sub, "--max-scale", max_scale, "generator: max |lambda| in units of n/beta");
    f["m-source"] = add(sub, "--m-source", m_source, "generator: mixed | psd | bk");
    f["chi-source"] = add(sub, "--chi-source", chi_source, "generator: mixed | one | indicator | gaussian");
    if (std::string(sd.name) == "kernel") {
      f["lambda"] = add(sub, "--lambda", lambda, "eigenvalue, or 'singular' for n/beta");
      f["force"] = sub->add_flag("--force-finite-eta", force_finite, "use the finite-eta branch at lambda = n/beta");
    }
    if (std::string(sd.name) == "wick-verify") {
      f["max-N"] = add(sub, "--max-N", max_N, "largest N (all permutations of 2N slots)");
      f["modes"] = add(sub, "--modes", modes, "Fock modes D");
      f["draws"] = add(sub, "--draws", draws, "random (S, Psi) draws per N");
    }
    if (std::string(sd.name) == "modular-verify") f["etas"] = add(sub, "--etas", etas, "eta values")->delimiter(',');
    if (std::string(sd.name) == "bk-matrix") {
      f["t"] = add(sub, "--t", t, "interpolation parameter in [0, 1]");
      f["m"] = add(sub, "--m", bk_m, "vertices of the random tree");
    }
    if (std::string(sd.name) == "sharpness" || std::string(sd.name) == "universal") {
      f["epsilon"] = add(sub, "--epsilon", epsilons, "epsilon values in (0, 1)")->delimiter(',');
      f["N-list"] = add(sub, "--N-list", N_list, "determinant sizes N")->delimiter(',');
    }
    if (std::string(sd.name) == "gram") f["n-list"] = add(sub, "--n-list", n_list, "torus orders")->delimiter(',');
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }

  const Sub* chosen = nullptr;
  for (const auto& sd : subs)
    if (app.got_subcommand(sd.name)) chosen = &sd;
  auto& f = flag[chosen->name];
  auto given = [&](const std::string& k) { return f.count(k) && f[k]->count() > 0; };

  try {
    if (given("config")) load_config(config, s);
    if (given("out")) s.out = out;
    if (given("summary")) s.summary = summary;
    if (given("jobs")) s.jobs = jobs;
    if (given("seed")) s.seed = seed;
    if (given("beta")) s.beta = beta;
    if (given("n")) s.n = n;
    if (given("eta")) s.eta = eta;
    if (given("count")) s.count = count;
    if (given("lambda")) s.lambda = lambda;
    if (given("force")) s.force_finite_eta = force_finite;
    if (given("max-N")) s.max_N = max_N;
    if (given("modes")) s.modes = modes;
    if (given("draws")) s.draws = draws;
    if (given("etas")) s.etas = etas;
    if (given("t")) s.t = t;
    if (given("m")) s.bk_m = bk_m;
    if (given("epsilon")) s.epsilons = epsilons;
    if (given("N-list")) s.N_list = N_list;
    if (given("n-list")) s.n_list = n_list;
    if (given("max-d")) s.gen.max_d = max_d;
    if (given("max-m")) s.gen.max_m = max_m;
    if (given("max-N-gen")) s.gen.max_N = gen_max_N;
    if (given("n-values")) s.gen.n_values = n_values;
    if (given("betas")) s.gen.betas = betas;
    if (given("max-scale")) s.gen.max_scale = max_scale;
    if (given("m-source")) s.gen.m_source = m_source;
    if (given("chi-source")) s.gen.chi_source = chi_source;
    if (given("diag")) {
      if (diag.empty()) throw UsageError("--diag needs at least one entry");
      s.H = CMatrix(Eigen::Map<const RVector>(diag.data(), diag.size()).cast<cplx>().asDiagonal());
    }
    if (given("chi")) {
      std::vector<std::string> parts;
      std::stringstream ss(chi);
      for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
      try {
        if (parts.size() == 1 && parts[0] == "one")
          s.chi = CutoffSpec::one();
        else if (parts.size() == 3 && parts[0] == "indicator")
          s.chi = CutoffSpec::indicator(std::stod(parts[1]), std::stod(parts[2]));
        else if (parts.size() == 3 && parts[0] == "gaussian")
          s.chi = CutoffSpec::gaussian(std::stod(parts[1]), std::stod(parts[2]));
        else
          throw UsageError("");
      } catch (const std::exception&) {
        throw UsageError("--chi must be one | indicator:lo:hi | gaussian:center:width, got '" + chi + "'");
      }
    }
    if (s.jobs < 0) throw UsageError("--jobs must be >= 0");
    return chosen->fn(s);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace fermicov::cli
