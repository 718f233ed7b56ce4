#include "octk/serialize.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "octk/error.hpp"

namespace octk {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

void expect_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

void check_keys(const Json& j, std::initializer_list<std::string_view> allowed,
                const std::string& path) {
  expect_object(j, path);
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == key;
    if (!ok) throw ConfigError(join(path, key), "unknown field");
  }
}

const Json& require(const Json& j, std::string_view key, const std::string& path) {
  expect_object(j, path);
  auto it = j.find(std::string(key));
  if (it == j.end()) throw ConfigError(join(path, key), "required field is missing");
  return *it;
}

double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

double number_or(const Json& j, std::string_view key, double fallback, const std::string& path) {
  auto it = j.find(std::string(key));
  return it == j.end() ? fallback : as_number(*it, join(path, key));
}

/// Runs a parser that throws DomainError and reports it against `path`.
template <class F>
auto parse_as(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
}

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

// ---------------------------------------------------------------------------

CircuitODE make_circuit(const CircuitSpec& spec) {
  return circuit_ode(spec.kind, SigmoidFamily::of_kind(spec.sigmoid), spec.params,
                     spec.timescales, spec.extras);
}

CircuitSpec describe(const CircuitODE& ode) {
  return {ode.kind(), ode.sigmoid().kind(), ode.params(), ode.timescales(), ode.extras()};
}

Json to_json(const ParamVector& p) {
  Json j = Json::object();
  for (const auto& [name, value] : p.entries()) j[name] = value;
  return j;
}

ParamVector params_from_json(const Json& j, const std::string& path) {
  expect_object(j, path);
  ParamVector p;
  for (const auto& [key, value] : j.items()) p.set(key, as_number(value, join(path, key)));
  return p;
}

Json to_json(const ProblemSpec& spec) {
  Json j;
  j["kind"] = spec.kind;
  j["sigmoid"] = std::string(to_string(spec.sigmoid));
  j["convention"] = std::string(to_string(spec.convention));
  j["delta"] = spec.delta;
  j["params"] = to_json(spec.params);
  return j;
}

ProblemSpec problem_spec_from_json(const Json& j, const std::string& path) {
  check_keys(j, {"kind", "sigmoid", "convention", "delta", "params"}, path);
  ProblemSpec spec;
  spec.kind = as_string(require(j, "kind", path), join(path, "kind"));
  if (j.contains("sigmoid")) {
    const auto name = as_string(j["sigmoid"], join(path, "sigmoid"));
    spec.sigmoid = parse_as(join(path, "sigmoid"), [&] { return parse_sigmoid_kind(name); });
  }
  if (j.contains("convention")) {
    const auto name = as_string(j["convention"], join(path, "convention"));
    spec.convention =
        parse_as(join(path, "convention"), [&] { return parse_sign_convention(name); });
  }
  spec.delta = number_or(j, "delta", spec.delta, path);
  if (j.contains("params")) spec.params = params_from_json(j["params"], join(path, "params"));
  ProblemSpec bare = spec;
  bare.params = {};
  const BifurcationProblem problem =
      parse_as(join(path, "kind"), [&] { return make_problem(bare); });
  for (const auto& [name, value] : spec.params.entries()) {
    if (!problem.has_parameter(name)) {
      throw ConfigError(join(join(path, "params"), name),
                        "problem '" + spec.kind + "' has no such parameter");
    }
  }
  parse_as(path, [&] { return make_problem(spec); });
  return spec;
}

Json to_json(const CircuitSpec& spec) {
  Json j;
  j["kind"] = std::string(to_string(spec.kind));
  j["sigmoid"] = std::string(to_string(spec.sigmoid));
  j["params"] = to_json(spec.params);
  j["timescales"] = {{"eps_f", spec.timescales.eps_f}, {"eps_u", spec.timescales.eps_u}};
  if (spec.extras) {
    j["extras"] = {{"k_u", spec.extras->k_u},
                   {"x_bar_u", spec.extras->x_bar_u},
                   {"wiring", std::string(to_string(spec.extras->wiring))}};
  } else {
    j["extras"] = nullptr;
  }
  return j;
}

CircuitSpec circuit_spec_from_json(const Json& j, const std::string& path) {
  check_keys(j, {"kind", "sigmoid", "params", "timescales", "extras"}, path);
  CircuitSpec spec;
  const auto kind = as_string(require(j, "kind", path), join(path, "kind"));
  spec.kind = parse_as(join(path, "kind"), [&] { return parse_circuit_kind(kind); });
  if (j.contains("sigmoid")) {
    const auto name = as_string(j["sigmoid"], join(path, "sigmoid"));
    spec.sigmoid = parse_as(join(path, "sigmoid"), [&] { return parse_sigmoid_kind(name); });
  }
  if (j.contains("params")) spec.params = params_from_json(j["params"], join(path, "params"));
  if (j.contains("timescales")) {
    const std::string tp = join(path, "timescales");
    check_keys(j["timescales"], {"eps_f", "eps_u"}, tp);
    spec.timescales.eps_f = number_or(j["timescales"], "eps_f", spec.timescales.eps_f, tp);
    spec.timescales.eps_u = number_or(j["timescales"], "eps_u", spec.timescales.eps_u, tp);
  }
  if (j.contains("extras") && !j["extras"].is_null()) {
    const std::string ep = join(path, "extras");
    check_keys(j["extras"], {"k_u", "x_bar_u", "wiring"}, ep);
    BursterExtras e;
    e.k_u = number_or(j["extras"], "k_u", e.k_u, ep);
    e.x_bar_u = number_or(j["extras"], "x_bar_u", e.x_bar_u, ep);
    if (j["extras"].contains("wiring")) {
      const auto w = as_string(j["extras"]["wiring"], join(ep, "wiring"));
      e.wiring = parse_as(join(ep, "wiring"), [&] { return parse_burster_wiring(w); });
    }
    spec.extras = e;
  } else if (spec.kind == CircuitKind::burster) {
    spec.extras = BursterExtras{};
  }
  parse_as(path, [&] { return make_circuit(spec); });
  return spec;
}

Json to_json(const InputSignal& s) {
  Json terms = Json::array();
  for (const auto& term : s.terms()) {
    std::visit(
        [&](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, ConstantShape>) {
            terms.push_back({{"type", "constant"}, {"value", t.value}});
          } else if constexpr (std::is_same_v<T, PulseShape>) {
            terms.push_back(
                {{"type", "pulse"}, {"t0", t.t0}, {"width", t.width}, {"height", t.height}});
          } else {
            terms.push_back(
                {{"type", "ramp"}, {"t0", t.t0}, {"t1", t.t1}, {"v0", t.v0}, {"v1", t.v1}});
          }
        },
        term);
  }
  return {{"channel", std::string(to_string(s.channel()))}, {"terms", terms}};
}

InputSignal signal_from_json(const Json& j, const std::string& path) {
  check_keys(j, {"channel", "terms"}, path);
  InputChannel channel = InputChannel::u;
  if (j.contains("channel")) {
    const auto name = as_string(j["channel"], join(path, "channel"));
    channel = parse_as(join(path, "channel"), [&] { return parse_input_channel(name); });
  }
  InputSignal s(channel);
  const Json& terms = require(j, "terms", path);
  if (!terms.is_array()) throw ConfigError(join(path, "terms"), "expected an array");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tp = join(path, "terms[" + std::to_string(i) + "]");
    const Json& t = terms[i];
    const auto type = as_string(require(t, "type", tp), join(tp, "type"));
    auto num = [&](std::string_view key) { return as_number(require(t, key, tp), join(tp, key)); };
    if (type == "constant") {
      check_keys(t, {"type", "value"}, tp);
      parse_as(tp, [&] { return s.add(ConstantShape{num("value")}); });
    } else if (type == "pulse") {
      check_keys(t, {"type", "t0", "width", "height"}, tp);
      parse_as(tp, [&] { return s.add(PulseShape{num("t0"), num("width"), num("height")}); });
    } else if (type == "ramp") {
      check_keys(t, {"type", "t0", "t1", "v0", "v1"}, tp);
      parse_as(tp, [&] { return s.add(RampShape{num("t0"), num("t1"), num("v0"), num("v1")}); });
    } else {
      throw ConfigError(join(tp, "type"), "expected constant, pulse or ramp");
    }
  }
  return s;
}

Json to_json(const RecognitionVerdict& v) {
  Json zeros = Json::array();
  for (const auto& c : v.zero_conditions) {
    zeros.push_back(
        {{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
  }
  Json signs = Json::array();
  for (const auto& c : v.sign_conditions) {
    signs.push_back({{"name", c.name},
                     {"value", c.value},
                     {"required", std::string(to_string(c.required))},
                     {"tolerance", c.tolerance},
                     {"passed", c.passed}});
  }
  return {{"singularity", v.singularity},
          {"y", v.y},
          {"u", v.u},
          {"passed", v.passed},
          {"zero_conditions", zeros},
          {"sign_conditions", signs}};
}

Json to_json(const VarietyMembership& m) {
  Json hits = Json::array();
  for (const auto& h : m.hits) {
    Json w = Json::array();
    for (const auto& [y, u] : h.witness) w.push_back({{"y", y}, {"u", u}});
    hits.push_back(
        {{"variety", std::string(to_string(h.variety))}, {"witness", w}, {"residual", h.residual}});
  }
  return {{"none", m.none()}, {"hits", hits}};
}

Json to_json(const BranchDiagram& d) {
  Json branches = Json::array();
  for (const auto& b : d.branches) {
    Json u = Json::array(), y = Json::array(), s = Json::array();
    for (const auto& p : b.samples) {
      u.push_back(p.u);
      y.push_back(p.y);
      s.push_back(std::string(to_string(p.stability)));
    }
    branches.push_back(
        {{"closed", b.closed}, {"truncated", b.truncated}, {"u", u}, {"y", y}, {"stability", s}});
  }
  Json folds = Json::array();
  for (const auto& f : d.folds) {
    folds.push_back({{"u", f.u}, {"y", f.y}, {"branch", f.branch}, {"g_y", f.g_y}});
  }
  return {{"u_window", {d.u_window.lo, d.u_window.hi}},
          {"y_window", {d.y_window.lo, d.y_window.hi}},
          {"arclength_step", d.arclength_step},
          {"branches", branches},
          {"folds", folds}};
}

Json to_json(const DiagramClass& c) {
  Json iv = Json::array();
  for (const auto& i : c.bistable_u_intervals) iv.push_back({i.lo, i.hi});
  return {{"label", std::string(to_string(c.label))},
          {"fold_count", c.fold_count},
          {"bistable_u_intervals", iv}};
}

Json to_json(const RegimeReport& r) {
  const auto& e = r.evidence;
  Json ev;
  ev["spike_count"] = e.spike_count;
  ev["period"] = optional_number(e.period);
  ev["isi_cv"] = optional_number(e.isi_cv);
  ev["amplitude"] = e.amplitude;
  ev["terminal_speed"] = e.terminal_speed;
  ev["burst_count"] = e.burst_count;
  ev["spikes_per_burst"] = e.spikes_per_burst;
  ev["intraburst_median"] = optional_number(e.intraburst_median);
  ev["interburst_min"] = optional_number(e.interburst_min);
  ev["interburst_mean"] = optional_number(e.interburst_mean);
  ev["separation"] = optional_number(e.separation);
  ev["attractor_count"] = e.attractor_count;
  ev["equilibrium_clusters"] = e.equilibrium_clusters;
  ev["periodic_clusters"] = e.periodic_clusters;
  ev["equilibria"] = e.equilibria;
  ev["periods"] = e.periods;
  ev["pulse_excursions"] = e.pulse_excursions;
  ev["pulse_ratios"] = e.pulse_ratios;
  return {{"label", std::string(to_string(r.label))},
          {"window", {r.t_lo, r.t_hi}},
          {"diagnostics", r.diagnostics},
          {"evidence", ev}};
}

Json to_json(const ParameterChart& c) {
  Json axes = Json::array();
  for (const auto& a : c.axes) {
    axes.push_back({{"name", a.name}, {"lo", a.lo}, {"hi", a.hi}, {"resolution", a.resolution}});
  }
  Json cells = Json::array();
  for (const auto& cell : c.cells) {
    Json v = Json::array();
    for (auto var : cell.varieties) v.push_back(std::string(to_string(var)));
    Json j = {{"index", cell.index},
              {"coords", cell.coords},
              {"label", cell.label},
              {"varieties", v},
              {"failed", cell.failed}};
    if (!cell.error.empty()) j["error"] = cell.error;
    if (cell.diagram) j["diagram"] = to_json(*cell.diagram);
    if (cell.regime) j["regime"] = to_json(*cell.regime);
    cells.push_back(std::move(j));
  }
  Json bounds = Json::array();
  for (const auto& b : c.boundaries) bounds.push_back({{"a", b.a}, {"b", b.b}, {"point", b.point}});
  return {{"kind", std::string(to_string(c.kind))},
          {"axes", axes},
          {"cells", cells},
          {"boundaries", bounds}};
}

Json to_json(const Region& r) {
  Json box = Json::array();
  for (const auto& i : r.bounding_box) box.push_back({i.lo, i.hi});
  return {{"label", r.label}, {"cells", r.cells}, {"bounding_box", box}, {"midpoint", r.midpoint}};
}

Json to_json(const IntegratorMeta& m) {
  return {{"method", m.method},
          {"rtol", m.rtol},
          {"atol", m.atol},
          {"max_step", m.max_step},
          {"dt_out", m.dt_out},
          {"accepted_steps", m.accepted_steps},
          {"rejected_steps", m.rejected_steps},
          {"restarts", m.restarts}};
}

void write_diagram_csv(std::ostream& os, const BranchDiagram& d) {
  os << "branch_id,u,y,stability\n";
  for (std::size_t b = 0; b < d.branches.size(); ++b) {
    for (const auto& s : d.branches[b].samples) {
      os << b << ',' << format_number(s.u) << ',' << format_number(s.y) << ','
         << to_string(s.stability) << '\n';
    }
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  os << 't';
  for (int i = 0; i < t.dimension; ++i) os << ",x" << i;
  os << ",y,u,alpha\n";
  for (std::size_t k = 0; k < t.size(); ++k) {
    os << format_number(t.times[k]);
    for (double x : t.state(k)) os << ',' << format_number(x);
    os << ',' << format_number(t.outputs[k]) << ',' << format_number(t.u_applied[k]) << ','
       << format_number(t.alpha_applied[k]) << '\n';
  }
}

Json trajectory_to_json(const Trajectory& t) {
  Json meta;
  meta["dimension"] = t.dimension;
  meta["samples"] = t.size();
  meta["integrator"] = to_json(t.meta);
  meta["ode"] = t.ode ? to_json(describe(*t.ode)) : Json(nullptr);
  Json j;
  j["meta"] = meta;
  j["t"] = t.times;
  for (int i = 0; i < t.dimension; ++i) {
    Json col = Json::array();
    for (std::size_t k = 0; k < t.size(); ++k) col.push_back(t.state(k)[i]);
    j["x" + std::to_string(i)] = std::move(col);
  }
  j["y"] = t.outputs;
  j["u"] = t.u_applied;
  j["alpha"] = t.alpha_applied;
  return j;
}

Trajectory trajectory_from_json(const Json& j) {
  const Json& meta = require(j, "meta", "");
  Trajectory t;
  const Json& dim = require(meta, "dimension", "meta");
  if (!dim.is_number_integer() || dim.get<int>() < 1 || dim.get<int>() > 3) {
    throw ConfigError("meta.dimension", "expected 1, 2 or 3");
  }
  t.dimension = dim.get<int>();
  if (meta.contains("ode") && !meta["ode"].is_null()) {
    t.ode = make_circuit(circuit_spec_from_json(meta["ode"], "meta.ode"));
    if (t.ode->dimension() != t.dimension) {
      throw ConfigError("meta.dimension", "does not match the circuit");
    }
  }
  if (meta.contains("integrator")) {
    const Json& m = meta["integrator"];
    t.meta.rtol = number_or(m, "rtol", 0.0, "meta.integrator");
    t.meta.atol = number_or(m, "atol", 0.0, "meta.integrator");
    t.meta.max_step = number_or(m, "max_step", 0.0, "meta.integrator");
    t.meta.dt_out = number_or(m, "dt_out", 0.0, "meta.integrator");
    auto count = [&](const char* key) {
      const double v = number_or(m, key, 0.0, "meta.integrator");
      if (v < 0.0 || v != std::floor(v)) {
        throw ConfigError(join("meta.integrator", key), "expected a nonnegative integer");
      }
      return static_cast<std::size_t>(v);
    };
    t.meta.accepted_steps = count("accepted_steps");
    t.meta.rejected_steps = count("rejected_steps");
    t.meta.restarts = count("restarts");
  }
  auto column = [&](const std::string& key) {
    const Json& c = require(j, key, "");
    if (!c.is_array()) throw ConfigError(key, "expected an array");
    std::vector<double> v;
    v.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      v.push_back(as_number(c[i], key + "[" + std::to_string(i) + "]"));
    }
    return v;
  };
  const auto times = column("t");
  std::vector<std::vector<double>> xs;
  for (int i = 0; i < t.dimension; ++i) xs.push_back(column("x" + std::to_string(i)));
  const auto y = column("y");
  const auto u = column("u");
  const auto a = column("alpha");
  for (const auto* c : {&y, &u, &a}) {
    if (c->size() != times.size()) throw ConfigError("t", "columns differ in length");
  }
  std::vector<double> x(static_cast<std::size_t>(t.dimension));
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (k > 0 && !(times[k] > times[k - 1])) throw ConfigError("t", "times must increase");
    for (int i = 0; i < t.dimension; ++i) {
      if (xs[static_cast<std::size_t>(i)].size() != times.size()) {
        throw ConfigError("x" + std::to_string(i), "columns differ in length");
      }
      x[static_cast<std::size_t>(i)] = xs[static_cast<std::size_t>(i)][k];
    }
    t.push(times[k], x, y[k], u[k], a[k]);
  }
  return t;
}

Trajectory read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("csv", "empty trajectory file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  const int n = static_cast<int>(header.size()) - 4;
  if (n < 1 || n > 3 || header.front() != "t" || header[header.size() - 3] != "y" ||
      header[header.size() - 2] != "u" || header.back() != "alpha") {
    throw ConfigError("csv.header", "expected t, x0.., y, u, alpha");
  }
  Trajectory t;
  t.dimension = n;
  std::vector<double> row(header.size());
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t k = 0;
    for (; k < row.size() && std::getline(ss, cell, ','); ++k) {
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      const auto r = std::from_chars(first, last, row[k]);
      if (r.ec != std::errc() || r.ptr != last) {
        throw ConfigError("csv.line" + std::to_string(lineno), "malformed number '" + cell + "'");
      }
    }
    if (k != row.size()) throw ConfigError("csv.line" + std::to_string(lineno), "missing columns");
    if (!t.times.empty() && !(row[0] > t.times.back())) {
      throw ConfigError("csv.line" + std::to_string(lineno), "times must increase");
    }
    const auto nn = static_cast<std::size_t>(n);
    t.push(row[0], std::span<const double>(row.data() + 1, nn), row[nn + 1], row[nn + 2],
           row[nn + 3]);
  }
  return t;
}

void write_chart_csv(std::ostream& os, const ParameterChart& c) {
  for (const auto& a : c.axes) os << a.name << ',';
  os << "label,varieties,failed\n";
  for (const auto& cell : c.cells) {
    for (double v : cell.coords) os << format_number(v) << ',';
    os << cell.label << ',';
    for (std::size_t k = 0; k < cell.varieties.size(); ++k) {
      if (k > 0) os << ';';
      os << to_string(cell.varieties[k]);
    }
    os << ',' << (cell.failed ? 1 : 0) << '\n';
  }
}

}  // namespace octk
