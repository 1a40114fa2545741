#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <thread>
#include <variant>

#include "burgers.hpp"
#include "geoflow/geoflow.hpp"

namespace geoflow::cli {

using nlohmann::json;

std::vector<double> parse_list(const std::string& text, int expected) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("not a number: '" + item + "' in '" + text + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw InvalidArgument("not a number: '" + item + "' in '" + text + "'");
    if (!std::isfinite(x)) throw InvalidArgument("non-finite value in '" + text + "'");
    values.push_back(x);
  }
  if (!text.empty() && text.back() == ',') throw InvalidArgument("trailing comma in '" + text + "'");
  if (expected >= 0 && static_cast<int>(values.size()) != expected) {
    throw InvalidArgument("expected " + std::to_string(expected) + " comma-separated values, got '" + text + "'");
  }
  return values;
}

std::vector<double> parse_scan(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3 || spec.back() == ':') throw InvalidArgument("scan must be start:stop:step, got '" + spec + "'");
  const double start = parse_list(parts[0], 1)[0];
  const double stop = parse_list(parts[1], 1)[0];
  const double step = parse_list(parts[2], 1)[0];
  if (!(step > 0.0)) throw InvalidArgument("scan step must be positive");
  if (stop < start) throw InvalidArgument("scan stop must not be below start");
  const double tol = 1e-12 * std::max(1.0, std::abs(stop));
  auto n = static_cast<long>(std::floor((stop - start) / step));
  while (start + static_cast<double>(n + 1) * step <= stop + tol) ++n;
  while (n > 0 && start + static_cast<double>(n) * step > stop + tol) --n;
  if (n > 10'000'000) throw InvalidArgument("scan has too many points");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) values.push_back(start + static_cast<double>(i) * step);
  return values;
}

unsigned thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GEOFLOW_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

namespace {

using Cell = std::variant<double, long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
  return std::get<std::string>(c);
}

json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
  if (const auto* l = std::get_if<long>(&c)) return *l;
  return std::get<std::string>(c);
}

struct OutputOptions {
  std::string path;
  std::string format;
};

void emit(std::ostream& out, const OutputOptions& o, const json& config, const Table& table, const json& summary) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!o.path.empty()) {
    file.open(o.path);
    if (!file) throw InvalidArgument("cannot open output file " + o.path);
    os = &file;
  }
  if (o.format == "json") {
    json doc;
    doc["config"] = config;
    doc["columns"] = table.columns;
    doc["rows"] = json::array();
    for (const auto& row : table.rows) {
      json r = json::array();
      for (const auto& c : row) r.push_back(cell_json(c));
      doc["rows"].push_back(std::move(r));
    }
    doc["summary"] = summary;
    *os << doc.dump(2) << '\n';
  } else {
    *os << "# config: " << config.dump() << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) *os << (i ? "," : "") << table.columns[i];
    *os << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) *os << (i ? "," : "") << cell_text(row[i]);
      *os << '\n';
    }
    if (!summary.is_null()) *os << "# summary: " << summary.dump() << '\n';
  }
  if (!*os) throw InvalidArgument("failed writing output");
}

// Accepts a file path or inline JSON text.
json load_json_arg(const std::string& path) {
  const auto first = path.find_first_not_of(" \t\n");
  if (first != std::string::npos && (path[first] == '{' || path[first] == '[')) {
    try {
      return json::parse(path);
    } catch (const json::parse_error& e) {
      throw InvalidArgument(std::string("inline JSON: ") + e.what());
    }
  }
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

AlgebraVector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

// Every subcommand registers its options on a CLI11 subcommand and runs
// after parsing.
struct Command {
  CLI::App* app = nullptr;
  OutputOptions output;
  std::function<void(std::ostream&)> execute;
};

void add_output_options(CLI::App* app, OutputOptions& o, const std::string& default_format) {
  o.format = default_format;
  app->add_option("-o,--output", o.path, "Output file (default stdout)");
  app->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

json base_config(const std::string& command, const OutputOptions& o) {
  json c;
  c["command"] = command;
  c["format"] = o.format;
  if (!o.path.empty()) c["output"] = o.path;
  return c;
}

// rigid-body ---------------------------------------------------------------

struct RigidBodyParams {
  std::string G = "1,2,3";
  std::string body;
  std::string v0 = "0.1,1,0";
  double dt = 1e-3;
  double T = 10.0;
  int record_every = 10;
};

void run_rigid_body(const RigidBodyParams& p, const OutputOptions& o, std::ostream& out) {
  std::array<double, 3> g{};
  json config = base_config("rigid-body", o);
  if (!p.body.empty()) {
    const json doc = load_json_arg(p.body);
    g = inertia_from_shape(parse_shape_json(doc)).G;
    config["body"] = doc;
  } else {
    const auto values = parse_list(p.G, 3);
    std::copy(values.begin(), values.end(), g.begin());
  }
  const auto v0 = parse_list(p.v0, 3);
  require(p.record_every >= 1, "record-every must be at least 1");
  config["G"] = g;
  config["v0"] = v0;
  config["dt"] = p.dt;
  config["T"] = p.T;
  config["record_every"] = p.record_every;

  const auto so3 = make_so3(g[0], g[1], g[2]);
  IntegrationOptions opts;
  opts.invariants.push_back({"L2", [g](const AlgebraVector& v) {
                               double s = 0.0;
                               for (int i = 0; i < 3; ++i) s += g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)] * v[i] * v[i];
                               return s;
                             }});
  const auto traj = integrate_geodesic(so3, to_vector(v0), p.dt, p.T, opts);
  const auto& energy = traj.invariant_log.at("energy");
  const auto& l2 = traj.invariant_log.at("L2");

  Table table{{"t", "v1", "v2", "v3", "energy", "L2"}, {}};
  double e_drift = 0.0, l_drift = 0.0;
  const std::size_t last = traj.times.size() - 1;
  for (std::size_t n = 0; n <= last; ++n) {
    e_drift = std::max(e_drift, std::abs(energy[n] - energy[0]));
    l_drift = std::max(l_drift, std::abs(l2[n] - l2[0]));
    if (n % static_cast<std::size_t>(p.record_every) == 0 || n == last) {
      const auto& v = traj.velocities[n];
      table.rows.push_back({traj.times[n], v[0], v[1], v[2], energy[n], l2[n]});
    }
  }
  json summary;
  summary["steps"] = static_cast<long>(last);
  summary["energy0"] = energy[0];
  summary["energy_drift"] = e_drift;
  summary["L2_0"] = l2[0];
  summary["L2_drift"] = l_drift;
  emit(out, o, config, table, summary);
}

// stability ----------------------------------------------------------------

struct StabilityParams {
  std::string shape = "cylinder";
  std::string body;
  double r = 1.0;
  double h = 1.0;
  std::string h_scan;
  double a = 1.0, b = 1.0, c = 1.0;
  int samples = 1000;
  std::uint64_t seed = 42;
};

template <class F>
void parallel_for(std::size_t count, F&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void run_stability(const StabilityParams& p, const OutputOptions& o, std::ostream& out) {
  json config = base_config("stability", o);
  config["samples"] = p.samples;
  config["seed"] = p.seed;
  require(p.samples >= 0, "samples must be non-negative");

  std::vector<RigidBodySpec> specs;
  std::vector<std::vector<Cell>> params;
  std::vector<std::string> columns;
  if (!p.body.empty()) {
    require(p.h_scan.empty(), "--h-scan cannot be combined with --body");
    const json doc = load_json_arg(p.body);
    specs.push_back(parse_shape_json(doc));
    config["body"] = doc;
    columns = {"shape"};
    params.push_back({doc.value("shape", std::string("?"))});
  } else if (p.shape == "cylinder") {
    config["shape"] = p.shape;
    config["r"] = p.r;
    std::vector<double> hs;
    if (!p.h_scan.empty()) {
      hs = parse_scan(p.h_scan);
      config["h_scan"] = p.h_scan;
    } else {
      hs = {p.h};
      config["h"] = p.h;
    }
    columns = {"r", "h", "h_over_r"};
    for (double h : hs) {
      specs.push_back(Cylinder{p.r, h});
      params.push_back({p.r, h, h / p.r});
    }
  } else {
    require(p.h_scan.empty(), "--h-scan requires --shape cylinder");
    config["shape"] = p.shape;
    config["a"] = p.a;
    config["b"] = p.b;
    config["c"] = p.c;
    if (p.shape == "box") {
      specs.push_back(Box{p.a, p.b, p.c});
    } else {
      specs.push_back(Ellipsoid{p.a, p.b, p.c});
    }
    columns = {"a", "b", "c"};
    params.push_back({p.a, p.b, p.c});
  }

  // Validate every shape before launching workers.
  std::vector<InertiaParameters> inertia;
  inertia.reserve(specs.size());
  for (const auto& s : specs) inertia.push_back(inertia_from_shape(s));

  std::vector<StabilityReport> reports(specs.size());
  parallel_for(specs.size(), [&](std::size_t i) {
    const auto& g = inertia[i].G;
    reports[i] = sectional_table(g[0], g[1], g[2], p.samples, p.seed);
  });

  Table table;
  table.columns = columns;
  for (const char* c : {"G1", "G2", "G3", "K12", "K23", "K31", "min_random_K", "verdict"}) table.columns.push_back(c);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    auto row = params[i];
    const auto& g = inertia[i].G;
    const auto& r = reports[i];
    for (double x : {g[0], g[1], g[2], r.sectional[0], r.sectional[1], r.sectional[2], r.min_random_K}) row.push_back(x);
    row.push_back(to_string(r.verdict));
    table.rows.push_back(std::move(row));
  }

  json summary;
  summary["points"] = static_cast<long>(specs.size());
  summary["stable"] = static_cast<long>(std::count_if(reports.begin(), reports.end(),
                                                       [](const auto& r) { return r.verdict == Verdict::Stable; }));
  if (p.body.empty() && p.shape == "cylinder") {
    summary["coin_threshold_h"] = coin_threshold(p.r);
    json changes = json::array();
    for (std::size_t i = 1; i < reports.size(); ++i) {
      if (std::signbit(reports[i - 1].sectional[0]) != std::signbit(reports[i].sectional[0])) {
        changes.push_back({std::get<double>(params[i - 1][1]), std::get<double>(params[i][1])});
      }
    }
    summary["K12_sign_changes"] = changes;
  }
  emit(out, o, config, table, summary);
}

// halfplane ----------------------------------------------------------------

struct HalfPlaneParams {
  std::string v0 = "0,1";
  std::string x0 = "1,0";
  double dt = 1e-3;
  double T = 5.0;
  int record_every = 10;
};

void run_halfplane(const HalfPlaneParams& p, const OutputOptions& o, std::ostream& out) {
  const auto v0 = parse_list(p.v0, 2);
  const auto x0 = parse_list(p.x0, 2);
  require(x0[0] > 0.0, "x0 must lie in the upper half plane (first coordinate > 0)");
  require(p.record_every >= 1, "record-every must be at least 1");
  json config = base_config("halfplane", o);
  config["v0"] = v0;
  config["x0"] = x0;
  config["dt"] = p.dt;
  config["T"] = p.T;
  config["record_every"] = p.record_every;

  const auto a = make_affine2();
  const auto traj = integrate_geodesic(a, to_vector(v0), p.dt, p.T);
  const auto rec = reconstruct_group(a, traj, HalfPlanePoint(x0[0], x0[1]));

  Table table{{"t", "v0", "v1", "x0", "x1", "F0", "F1", "Fm1"}, {}};
  std::vector<HalfPlanePoint> path;
  KillingCharges first{};
  double drift0 = 0.0, drift1 = 0.0, driftm1 = 0.0;
  const std::size_t last = rec.times.size() - 1;
  for (std::size_t n = 0; n <= last; ++n) {
    const auto& x = std::get<HalfPlanePoint>(rec.group_points[n]);
    const auto& v = rec.velocities[n];
    const auto f = halfplane_invariants(x, v);
    if (n == 0) first = f;
    drift0 = std::max(drift0, std::abs(f.f0 - first.f0));
    drift1 = std::max(drift1, std::abs(f.f1 - first.f1));
    driftm1 = std::max(driftm1, std::abs(f.fm1 - first.fm1));
    path.push_back(x);
    if (n % static_cast<std::size_t>(p.record_every) == 0 || n == last) {
      table.rows.push_back({rec.times[n], v[0], v[1], x[0], x[1], f.f0, f.f1, f.fm1});
    }
  }

  json summary;
  summary["steps"] = static_cast<long>(last);
  summary["F0_drift"] = drift0;
  summary["F1_drift"] = drift1;
  summary["Fm1_drift"] = driftm1;
  // A geodesic with F1 = 0 is a vertical ray rather than a semicircle.
  if (std::abs(first.f1) > 1e-12) {
    const auto fit = fit_semicircle(path);
    summary["semicircle"] = {{"radius", fit.radius}, {"center", fit.center}, {"residual", fit.residual}};
  } else {
    summary["semicircle"] = nullptr;
  }
  emit(out, o, config, table, summary);
}

// curvature ----------------------------------------------------------------

struct CurvatureParams {
  std::string algebra;
  std::string params;
  std::string u, v;
  double max_norm = 2.0;
  int samples = 0;
  std::uint64_t seed = 42;
};

struct Plane {
  std::string u_label, v_label;
  AlgebraVector u, v;
};

std::string mode_label(const char* fn, const Mode2D& k) {
  return std::string(fn) + "(" + std::to_string(k.k1) + "," + std::to_string(k.k2) + ")";
}

int cutoff_param(const std::string& params) {
  if (params.empty()) return 2;
  const double n = parse_list(params, 1)[0];
  require(n == std::floor(n) && n >= 1 && n <= 64, "cutoff must be an integer in [1, 64]");
  return static_cast<int>(n);
}

void run_curvature(const CurvatureParams& p, const OutputOptions& o, std::ostream& out) {
  json config = base_config("curvature", o);
  config["algebra"] = p.algebra;
  config["samples"] = p.samples;
  config["seed"] = p.seed;
  require(p.samples >= 0, "samples must be non-negative");

  std::optional<MetricLieAlgebra> algebra;
  std::vector<std::string> labels;
  int cutoff = 0;
  if (p.algebra == "so3") {
    const auto g = parse_list(p.params.empty() ? "1,2,3" : p.params, 3);
    config["params"] = g;
    algebra = make_so3(g[0], g[1], g[2]);
    labels = {"e1", "e2", "e3"};
  } else if (p.algebra == "affine2") {
    require(p.params.empty(), "affine2 takes no parameters");
    algebra = make_affine2();
    labels = {"e0", "e1"};
  } else if (p.algebra == "vect_s1") {
    cutoff = cutoff_param(p.params);
    config["params"] = cutoff;
    algebra = make_vect_s1(cutoff);
    labels.resize(static_cast<std::size_t>(algebra->dim()));
    labels[static_cast<std::size_t>(vect_s1_constant_index())] = "1";
    for (int n = 1; n <= cutoff; ++n) {
      labels[static_cast<std::size_t>(vect_s1_cos_index(n))] = "cos(" + std::to_string(n) + "x)";
      labels[static_cast<std::size_t>(vect_s1_sin_index(n))] = "sin(" + std::to_string(n) + "x)";
    }
  } else {
    cutoff = cutoff_param(p.params);
    config["params"] = cutoff;
    config["max_norm"] = p.max_norm;
    algebra = make_sdiff_t2(cutoff);
    const TorusModeBasis basis(cutoff);
    labels.resize(static_cast<std::size_t>(algebra->dim()));
    for (const auto& k : basis.representatives()) {
      labels[static_cast<std::size_t>(basis.cos_index(k))] = mode_label("cos", k);
      labels[static_cast<std::size_t>(basis.sin_index(k))] = mode_label("sin", k);
    }
  }
  const auto& A = *algebra;

  std::vector<Plane> planes;
  if (!p.u.empty() || !p.v.empty()) {
    require(!p.u.empty() && !p.v.empty(), "--u and --v must be given together");
    const auto u = parse_list(p.u, A.dim());
    const auto v = parse_list(p.v, A.dim());
    config["u"] = u;
    config["v"] = v;
    planes.push_back({"u", "v", to_vector(u), to_vector(v)});
  } else if (p.algebra == "sdiff_t2") {
    const TorusModeBasis basis(cutoff);
    for (const auto& e : curvature_mode_scan(cutoff, p.max_norm)) {
      const int iu = e.u_sine ? basis.sin_index(e.k_u) : basis.cos_index(e.k_u);
      const int iv = e.v_sine ? basis.sin_index(e.k_v) : basis.cos_index(e.k_v);
      planes.push_back({labels[static_cast<std::size_t>(iu)], labels[static_cast<std::size_t>(iv)],
                        basis_vector(A, iu), basis_vector(A, iv)});
    }
  } else {
    for (int i = 0; i < A.dim(); ++i) {
      for (int j = i + 1; j < A.dim(); ++j) {
        planes.push_back({labels[static_cast<std::size_t>(i)], labels[static_cast<std::size_t>(j)], basis_vector(A, i),
                          basis_vector(A, j)});
      }
    }
  }

  Table table{{"u", "v", "R", "K"}, {}};
  json plane_list = json::array();
  double kmin = INFINITY, kmax = -INFINITY;
  long neg = 0, zero = 0, pos = 0;
  for (const auto& pl : planes) {
    const double R = curvature_biquadratic(A, pl.u, pl.v);
    const double K = sectional_curvature(A, pl.u, pl.v);
    table.rows.push_back({pl.u_label, pl.v_label, R, K});
    plane_list.push_back({{"u", pl.u_label}, {"v", pl.v_label}, {"R", R}, {"K", K}});
    kmin = std::min(kmin, K);
    kmax = std::max(kmax, K);
    if (std::abs(K) <= 1e-12) {
      ++zero;
    } else if (K < 0) {
      ++neg;
    } else {
      ++pos;
    }
  }

  json summary;
  summary["algebra"] = A.label();
  summary["dim"] = A.dim();
  summary["planes"] = static_cast<long>(planes.size());
  summary["min_K"] = kmin;
  summary["max_K"] = kmax;
  summary["negative"] = neg;
  summary["zero"] = zero;
  summary["positive"] = pos;
  if (p.samples > 0) {
    std::mt19937_64 rng(p.seed);
    std::normal_distribution<double> normal;
    double rmin = INFINITY, rmax = -INFINITY;
    for (int s = 0; s < p.samples; ++s) {
      AlgebraVector u(A.dim()), v(A.dim());
      for (int i = 0; i < A.dim(); ++i) u[i] = normal(rng);
      for (int i = 0; i < A.dim(); ++i) v[i] = normal(rng);
      const double K = sectional_curvature(A, u, v);
      rmin = std::min(rmin, K);
      rmax = std::max(rmax, K);
    }
    summary["random_planes"] = {{"samples", p.samples}, {"min_K", rmin}, {"max_K", rmax}};
  }

  if (o.format == "json") {
    json report;
    report["config"] = config;
    report["algebra"] = A.label();
    report["dim"] = A.dim();
    report["planes"] = plane_list;
    report["summary"] = summary;
    std::ofstream file;
    std::ostream* os = &out;
    if (!o.path.empty()) {
      file.open(o.path);
      if (!file) throw InvalidArgument("cannot open output file " + o.path);
      os = &file;
    }
    *os << report.dump(2) << '\n';
  } else {
    emit(out, o, config, table, summary);
  }
}

// burgers ------------------------------------------------------------------

struct BurgersParams {
  int N = 32;
  double T = 0.3;
  double dt = 1e-3;
  double amplitude = 1.0;
  int points = 256;
};

void run_burgers(const BurgersParams& p, const OutputOptions& o, std::ostream& out) {
  json config = base_config("burgers", o);
  config["N"] = p.N;
  config["T"] = p.T;
  config["dt"] = p.dt;
  config["amplitude"] = p.amplitude;
  config["points"] = p.points;
  const auto cmp = burgers_compare(p.N, p.amplitude, p.T, p.dt, p.points);
  Table table{{"x", "geodesic", "characteristics", "abs_error"}, {}};
  for (std::size_t i = 0; i < cmp.x.size(); ++i) {
    table.rows.push_back({cmp.x[i], cmp.geodesic[i], cmp.characteristics[i],
                          std::abs(cmp.geodesic[i] - cmp.characteristics[i])});
  }
  json summary;
  summary["sup_error"] = cmp.sup_error;
  summary["shock_time"] = cmp.shock_time;
  emit(out, o, config, table, summary);
}

// fluid2d ------------------------------------------------------------------

struct Fluid2DParams {
  int N = 8;
  double T = 1.0;
  double dt = 1e-3;
  std::string init;
  std::uint64_t seed = 42;
  double amplitude = 1.0;
  int record_every = 10;
  bool check_equivalence = false;
  std::vector<std::string> track;
};

void run_fluid2d(const Fluid2DParams& p, const OutputOptions& o, std::ostream& out) {
  require(p.N >= 1 && p.N <= 128, "N must be in [1, 128]");
  require(!p.check_equivalence || p.N <= 4, "--check-equivalence requires N <= 4");
  json config = base_config("fluid2d", o);
  config["N"] = p.N;
  config["T"] = p.T;
  config["dt"] = p.dt;
  config["record_every"] = p.record_every;
  config["check_equivalence"] = p.check_equivalence;

  std::optional<SpectralField2D> omega0;
  if (!p.init.empty()) {
    const json doc = load_json_arg(p.init);
    omega0 = field_from_json(p.N, doc);
    config["init"] = doc;
  } else {
    omega0 = random_vorticity(p.N, p.seed, p.amplitude);
    config["seed"] = p.seed;
    config["amplitude"] = p.amplitude;
  }

  std::vector<Mode2D> tracked;
  json track_cfg = json::array();
  for (const auto& t : p.track) {
    const auto k = parse_list(t, 2);
    require(k[0] == std::floor(k[0]) && k[1] == std::floor(k[1]), "tracked modes must be integer pairs");
    const Mode2D m{static_cast<int>(k[0]), static_cast<int>(k[1])};
    require(omega0->in_cutoff(m), "tracked mode " + t + " is outside the cutoff");
    tracked.push_back(m);
    track_cfg.push_back({m.k1, m.k2});
  }
  config["track"] = track_cfg;

  std::vector<std::vector<double>> amplitudes;
  const auto series = evolve(
      *omega0, p.dt, p.T,
      [&](double, const SpectralField2D& w) {
        std::vector<double> a;
        for (const auto& k : tracked) a.push_back(std::abs(w[k]));
        amplitudes.push_back(std::move(a));
      },
      p.record_every);

  Table table{{"t", "energy", "enstrophy"}, {}};
  for (const auto& k : tracked) table.columns.push_back("abs_w(" + std::to_string(k.k1) + ";" + std::to_string(k.k2) + ")");
  double e_drift = 0.0, z_drift = 0.0;
  for (std::size_t n = 0; n < series.times.size(); ++n) {
    e_drift = std::max(e_drift, std::abs(series.energy[n] - series.energy[0]));
    z_drift = std::max(z_drift, std::abs(series.enstrophy[n] - series.enstrophy[0]));
    std::vector<Cell> row{series.times[n], series.energy[n], series.enstrophy[n]};
    for (double a : amplitudes[n]) row.push_back(a);
    table.rows.push_back(std::move(row));
  }

  json summary;
  summary["energy0"] = series.energy[0];
  summary["enstrophy0"] = series.enstrophy[0];
  summary["energy_drift"] = e_drift;
  summary["enstrophy_drift"] = z_drift;
  if (p.check_equivalence) {
    summary["equivalence_sup_deviation"] = equivalence_vs_geodesic(p.N, *omega0, p.dt, p.T);
  }
  emit(out, o, config, table, summary);
}

// clebsch ------------------------------------------------------------------

struct ClebschParams {
  int n = 16;
  double T = 0.5;
  double dt = 1e-3;
  std::string init;
  int record_every = 50;
};

json default_clebsch_modes() {
  return json::parse(R"({
    "p": [{"k": [1, 0, 0], "im": -0.25}, {"k": [0, 1, 1], "re": 0.075},
          {"k": [1, -1, 0], "re": 0.025, "im": 0.05}],
    "q": [{"k": [0, 1, 0], "re": 0.25}, {"k": [1, 0, -1], "im": 0.05},
          {"k": [0, 0, 1], "re": 0.05, "im": 0.025}]
  })");
}

void run_clebsch(const ClebschParams& p, const OutputOptions& o, std::ostream& out) {
  require(p.record_every >= 1, "record-every must be at least 1");
  const SpectralOps3D ops(p.n);
  const json init = p.init.empty() ? default_clebsch_modes() : load_json_arg(p.init);
  require(init.is_object(), "Clebsch init must be an object with keys p and q");
  for (const auto& [key, _] : init.items()) require(key == "p" || key == "q", "unknown key in Clebsch init: " + key);
  require(init.contains("p") && init.contains("q"), "Clebsch init needs both p and q");

  json config = base_config("clebsch", o);
  config["n"] = p.n;
  config["T"] = p.T;
  config["dt"] = p.dt;
  config["record_every"] = p.record_every;
  config["init"] = init;

  auto state = make_clebsch_state(ops, field_from_modes(ops, modes3d_from_json(init.at("p"))),
                                  field_from_modes(ops, modes3d_from_json(init.at("q"))));
  const long steps = step_count(p.dt, p.T);
  Table table{{"t", "energy", "divergence", "curl_discrepancy"}, {}};
  auto d = diagnose(ops, state, 0.0);
  const double e0 = d.energy;
  double max_div = d.divergence, max_curl = d.curl_discrepancy, e_drift = 0.0;
  table.rows.push_back({d.t, d.energy, d.divergence, d.curl_discrepancy});
  for (long n = 1; n <= steps; ++n) {
    const double t_prev = static_cast<double>(n - 1) * p.dt;
    const double t = (n == steps) ? p.T : static_cast<double>(n) * p.dt;
    try {
      state = clebsch_step(ops, state, t - t_prev);
    } catch (const NumericalFailure&) {
      throw NumericalFailure("non-finite Clebsch state", static_cast<std::size_t>(n));
    }
    max_div = std::max(max_div, divergence_sup(ops, state.v));
    if (n % p.record_every == 0 || n == steps) {
      d = diagnose(ops, state, t);
      max_curl = std::max(max_curl, d.curl_discrepancy);
      e_drift = std::max(e_drift, std::abs(d.energy - e0));
      table.rows.push_back({d.t, d.energy, d.divergence, d.curl_discrepancy});
    }
  }
  json summary;
  summary["steps"] = steps;
  summary["energy0"] = e0;
  summary["energy_drift_relative"] = e0 > 0 ? e_drift / e0 : e_drift;
  summary["max_divergence"] = max_div;
  summary["max_curl_discrepancy"] = max_curl;
  emit(out, o, config, table, summary);
}

// deviation ----------------------------------------------------------------

struct DeviationParams {
  std::string model;
  std::string u, v;
  double G = 1.0;
  double eps = 1e-6;
  int points = 20;
  double t_max = 0.0;
};

void run_deviation(const DeviationParams& p, const OutputOptions& o, std::ostream& out) {
  json config = base_config("deviation", o);
  config["model"] = p.model;
  std::optional<MetricLieAlgebra> algebra;
  std::string u_text = p.u, v_text = p.v;
  if (p.model == "affine2") {
    algebra = make_affine2();
    if (u_text.empty()) u_text = "0,1";
    if (v_text.empty()) v_text = "1,0";
  } else {
    require(p.G > 0.0, "G must be positive");
    algebra = make_so3(p.G, p.G, p.G);
    config["G"] = p.G;
    if (u_text.empty()) u_text = "0,1,0";
    if (v_text.empty()) v_text = "1,0,0";
  }
  const auto& A = *algebra;
  const auto u = to_vector(parse_list(u_text, A.dim()));
  const auto v = to_vector(parse_list(v_text, A.dim()));
  require(p.points >= 3, "points must be at least 3");
  config["u"] = parse_list(u_text);
  config["v"] = parse_list(v_text);
  config["eps"] = p.eps;
  config["points"] = p.points;

  std::vector<double> grid;
  if (p.t_max > 0.0) {
    for (int i = 1; i <= p.points; ++i) grid.push_back(p.t_max * i / p.points);
    config["t_max"] = p.t_max;
  } else {
    grid = default_deviation_grid(A, v, p.points);
  }
  const auto fit = deviation_expansion(A, v, u, p.eps, grid);
  const double R = curvature_biquadratic(A, u, v);
  const double expected = -R / 3.0;
  const double cubic = fit.coefficient(3);

  // Same deviation sampled on a wider window with an even-power model.
  std::vector<double> wide;
  const double wide_max = 0.5 / norm(A, v);
  for (int i = 1; i <= p.points; ++i) wide.push_back(wide_max * i / p.points);
  const auto even = deviation_fit(A, v, u, p.eps, wide, {2, 4, 6});

  json summary;
  summary["R"] = R;
  summary["expected_cubic"] = expected;
  summary["fitted_quadratic"] = fit.coefficient(2);
  summary["expected_quadratic"] = inner(A, u, u);
  summary["fitted_cubic"] = cubic;
  summary["cubic_relative_error"] = expected != 0.0 ? std::abs(cubic - expected) / std::abs(expected) : std::abs(cubic);
  summary["rms_residual"] = fit.rms_residual;
  summary["even_fit"] = {{"t_max", wide_max},
                         {"t2", even.coefficient(2)},
                         {"t4", even.coefficient(4)},
                         {"t6", even.coefficient(6)},
                         {"rms_residual", even.rms_residual}};

  Table table{{"t", "y_squared"}, {}};
  for (std::size_t i = 0; i < fit.times.size(); ++i) table.rows.push_back({fit.times[i], fit.y_squared[i]});
  emit(out, o, config, table, summary);
}

// configuration file -------------------------------------------------------

std::string scalar_token(const json& value, const std::string& key) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer() || value.is_number_unsigned()) return value.dump();
  if (value.is_number_float()) return format_number(value.get<double>());
  throw InvalidArgument("config key '" + key + "' has an unsupported value");
}

std::string list_token(const json& value, const std::string& key) {
  if (!value.is_array()) return scalar_token(value, key);
  std::string s;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (value[i].is_array() || value[i].is_object()) throw InvalidArgument("config key '" + key + "' is nested too deeply");
    s += (i ? "," : "") + scalar_token(value[i], key);
  }
  return s;
}

// Splices the keys of a --config JSON object into argv right after the
// subcommand name, so that explicit flags later on the line win.
std::vector<std::string> expand_config(std::vector<std::string> args, const CLI::App& app,
                                       const std::vector<std::string>& repeatable,
                                       const std::vector<std::string>& json_valued) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw InvalidArgument("--config needs a file argument");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (path.empty()) return args;

  const json doc = load_json_arg(path);
  if (!doc.is_object()) throw InvalidArgument("config file must hold a JSON object");
  std::string command;
  if (doc.contains("command")) {
    if (!doc.at("command").is_string()) throw InvalidArgument("config key 'command' must be a string");
    command = doc.at("command").get<std::string>();
  }
  if (args.size() > 1 && !args[1].empty() && args[1][0] != '-') {
    if (!command.empty() && command != args[1]) {
      throw InvalidArgument("config command '" + command + "' does not match '" + args[1] + "'");
    }
    command = args[1];
  } else if (!command.empty()) {
    args.insert(args.begin() + 1, command);
  } else {
    throw InvalidArgument("no subcommand given");
  }
  const CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(command);
  } catch (const CLI::OptionNotFound&) {
    throw InvalidArgument("unknown subcommand '" + command + "'");
  }

  std::vector<std::string> tokens;
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") continue;
    if (key == "config") throw InvalidArgument("config files cannot nest");
    if (key.empty() || key.find_first_of(" =") != std::string::npos) throw InvalidArgument("bad config key '" + key + "'");
    std::string flag = "--" + key;
    std::replace(flag.begin() + 2, flag.end(), '_', '-');
    if (sub->get_option_no_throw(flag) == nullptr) {
      throw InvalidArgument("unknown config key '" + key + "' for " + command);
    }
    if (value.is_boolean()) {
      if (value.get<bool>()) tokens.push_back(flag);
      continue;
    }
    if (value.is_null()) continue;
    if (!value.is_string() && std::find(json_valued.begin(), json_valued.end(), key) != json_valued.end()) {
      tokens.push_back(flag);
      tokens.push_back(value.dump());
      continue;
    }
    const bool repeat = std::find(repeatable.begin(), repeatable.end(), key) != repeatable.end();
    if (repeat && value.is_array()) {
      for (const auto& item : value) {
        tokens.push_back(flag);
        tokens.push_back(list_token(item, key));
      }
      continue;
    }
    tokens.push_back(flag);
    tokens.push_back(list_token(value, key));
  }

  args.insert(args.begin() + 2, tokens.begin(), tokens.end());
  return args;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geodesic flows on Lie groups: rigid bodies, curvature and ideal fluids", "geoflow"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", "geoflow 0.1.0");
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with option values (keys mirror the long flags)");

  std::vector<Command> commands;
  commands.reserve(8);

  RigidBodyParams rb;
  {
    auto* sub = app.add_subcommand("rigid-body", "Free rigid body: trajectory and conserved quantities");
    sub->add_option("--G", rb.G, "Principal moments G1,G2,G3");
    sub->add_option("--body", rb.body, "Shape JSON file; overrides --G");
    sub->add_option("--v0", rb.v0, "Initial body angular velocity");
    sub->add_option("--dt", rb.dt, "Time step");
    sub->add_option("--T", rb.T, "Final time");
    sub->add_option("--record-every", rb.record_every, "Output stride in steps");
    auto& c = commands.emplace_back();
    c.app = sub;
    add_output_options(sub, c.output, "csv");
    c.execute = [&rb, &c](std::ostream& os) { run_rigid_body(rb, c.output, os); };
  }

  StabilityParams st;
  {
    auto* sub = app.add_subcommand("stability", "Rigid-body stability map from sectional curvature");
    sub->add_option("--shape", st.shape, "Body shape")->check(CLI::IsMember({"cylinder", "box", "ellipsoid"}));
    sub->add_option("--body", st.body, "Shape JSON file");
    sub->add_option("--r", st.r, "Cylinder radius");
    sub->add_option("--h", st.h, "Cylinder height");
    sub->add_option("--h-scan", st.h_scan, "Cylinder height scan start:stop:step");
    sub->add_option("--a", st.a, "Box side / ellipsoid semi-axis along e1");
    sub->add_option("--b", st.b, "Box side / ellipsoid semi-axis along e2");
    sub->add_option("--c", st.c, "Box side / ellipsoid semi-axis along e3");
    sub->add_option("--samples", st.samples, "Random planes per shape");
    sub->add_option("--seed", st.seed, "Random seed");
    auto& c = commands.emplace_back();
    c.app = sub;
    add_output_options(sub, c.output, "csv");
    c.execute = [&st, &c](std::ostream& os) { run_stability(st, c.output, os); };
  }

  HalfPlaneParams hp;
  {
    auto* sub = app.add_subcommand("halfplane", "Geodesics of the affine group of the line (Poincare half plane)");
    sub->add_option("--v0", hp.v0, "Initial algebra velocity");
    sub->add_option("--x0", hp.x0, "Initial point (x0 > 0)");
    sub->add_option("--dt", hp.dt, "Time step");
    sub->add_option("--T", hp.T, "Final time");
    sub->add_option("--record-every", hp.record_every, "Output stride in steps");
    auto& c = commands.emplace_back();
    c.app = sub;
    add_output_options(sub, c.output, "csv");
    c.execute = [&hp, &c](std::ostream& os) { run_halfplane(hp, c.output, os); };
  }

  CurvatureParams cv;
  {
    auto* sub = app.add_subcommand("curvature", "Sectional curvature report for a registered algebra");
    sub->add_option("--algebra", cv.algebra, "Algebra")
        ->required()
        ->check(CLI::IsMember({"so3", "affine2", "vect_s1", "sdiff_t2"}));
    sub->add_option("--params", cv.params, "so3: G1,G2,G3; vect_s1 and sdiff_t2: cutoff N");
    sub->add_option("--u", cv.u, "First plane vector");
    sub->add_option("--v", cv.v, "Second plane vector");
    sub->add_option("--max-norm", cv.max_norm, "sdiff_t2: largest |k| in the mode-pair scan");
    sub->add_option("--samples", cv.samples, "Random planes to sample");
    sub->add_option("--seed", cv.seed, "Random seed");
    auto& c = commands.emplace_back();
    c.app = sub;
    add_output_options(sub, c.output, "json");
    c.execute = [&cv, &c](std::ostream& os) { run_curvature(cv, c.output, os); };
  }

  BurgersParams bg;
  {
    auto* sub = app.add_subcommand("burgers", "Truncated geodesic flow on vect(S1) vs characteristics");
    sub->add_option("--N", bg.N, "Fourier cutoff");
    sub->add_option("--T", bg.T, "Final time");
    sub->add_option("--dt", bg.dt, "Time step");
    sub->add_option("--amplitude", bg.amplitude, "Initial data A sin x");
    sub->add_option("--points", bg.points, "Sample points on [0, 2pi)");
    auto& c = commands.emplace_back();
    c.app = sub;
    add_output_options(sub, c.output, "csv");
    c.execute = [&bg, &c](std::ostream& os) { run_burgers(bg, c.output, os); };
  }

  Fluid2DParams fl;
  {
    auto* sub = app.add_subcommand("fluid2d", "Spectral 2D Euler on the torus");
    sub->add_option("--N", fl.N, "Fourier cutoff");
    sub->add_option("--T", fl.T, "Final time");
    sub->add_option("--dt", fl.dt, "Time step");
    sub->add_option("--init", fl.init, "Vorticity mode list JSON (default: random data)");
    sub->add_option("--seed", fl.seed, "Seed for random initial data");
    sub->add_option("--amplitude", fl.amplitude, "Amplitude of random initial data");
    sub->add_option("--record-every", fl.record_every, "Output stride in steps");
    sub->add_flag("--check-equivalence", fl.check_equivalence, "Compare with the generic geodesic integrator (N <= 4)");
    sub->add_option("--track", fl.track, "Mode k1,k2 whose |w_k| is written (repeatable)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    auto& c = commands.emplace_back();
    c.app = sub;
    add_output_options(sub, c.output, "csv");
    c.execute = [&fl, &c](std::ostream& os) { run_fluid2d(fl, c.output, os); };
  }

  ClebschParams cl;
  {
    auto* sub = app.add_subcommand("clebsch", "3D ideal flow in Clebsch variables");
    sub->add_option("--n", cl.n, "Grid points per side (even, >= 8)");
    sub->add_option("--T", cl.T, "Final time");
    sub->add_option("--dt", cl.dt, "Time step");
    sub->add_option("--init", cl.init, "JSON object with p and q mode lists");
    sub->add_option("--record-every", cl.record_every, "Diagnostics stride in steps");
    auto& c = commands.emplace_back();
    c.app = sub;
    add_output_options(sub, c.output, "csv");
    c.execute = [&cl, &c](std::ostream& os) { run_clebsch(cl, c.output, os); };
  }

  DeviationParams dv;
  {
    auto* sub = app.add_subcommand("deviation", "Small-time geodesic deviation fit");
    sub->add_option("--model", dv.model, "Group model")
        ->required()
        ->check(CLI::IsMember({"affine2", "so3-biinvariant"}));
    sub->add_option("--u", dv.u, "Perturbation direction");
    sub->add_option("--v", dv.v, "Base velocity");
    sub->add_option("--G", dv.G, "so3-biinvariant: metric scale");
    sub->add_option("--eps", dv.eps, "Perturbation size");
    sub->add_option("--points", dv.points, "Fit samples");
    sub->add_option("--t-max", dv.t_max, "Fit window end (default 0.1/|v|)");
    auto& c = commands.emplace_back();
    c.app = sub;
    add_output_options(sub, c.output, "json");
    c.execute = [&dv, &c](std::ostream& os) { run_deviation(dv, c.output, os); };
  }

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = expand_config(std::move(args), app, {"track"}, {"init", "body"});
    std::vector<const char*> ptrs;
    for (const auto& a : args) ptrs.push_back(a.c_str());
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << "geoflow 0.1.0\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    for (auto& c : commands) {
      if (c.app->parsed()) c.execute(out);
    }
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace geoflow::cli
