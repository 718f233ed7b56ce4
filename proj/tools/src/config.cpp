#include "octk/cli/config.hpp"

#include <fstream>
#include <limits>

#include "fields.hpp"

namespace octk::cli {

namespace fs = std::filesystem;

std::string_view to_string(Command c) {
  switch (c) {
    case Command::recognize: return "recognize";
    case Command::trace: return "trace";
    case Command::simulate: return "simulate";
    case Command::classify: return "classify";
    case Command::scan: return "scan";
  }
  return "?";
}

Command parse_command(std::string_view name) {
  for (auto c : {Command::recognize, Command::trace, Command::simulate, Command::classify,
                 Command::scan}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("command", "unknown command '" + std::string(name) + "'");
}

std::string_view to_string(Singularity s) {
  switch (s) {
    case Singularity::hysteresis: return "hysteresis";
    case Singularity::wcusp: return "wcusp";
    case Singularity::hysteresis_unfolding: return "hysteresis-unfolding";
  }
  return "?";
}

namespace {

Singularity parse_singularity(std::string_view name, const std::string& where) {
  for (auto s : {Singularity::hysteresis, Singularity::wcusp, Singularity::hysteresis_unfolding}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError(where, "expected hysteresis, wcusp or hysteresis-unfolding");
}

Interval window(Fields& f, std::string_view key, Interval fallback) {
  const auto r = f.range(key);
  return r ? Interval{r->first, r->second} : fallback;
}

IntegratorOptions read_integrator(Fields& parent) {
  IntegratorOptions o;
  if (!parent.has("integrator")) return o;
  Fields f(parent.at("integrator"), parent.path("integrator"));
  o.rtol = f.positive("rtol", o.rtol);
  o.atol = f.positive("atol", o.atol);
  o.max_step = f.number("max_step", o.max_step);
  o.dt_out = f.number("dt_out", o.dt_out);
  o.min_step = f.positive("min_step", o.min_step);
  f.finish();
  return o;
}

Json integrator_json(const IntegratorOptions& o) {
  return {{"rtol", o.rtol},
          {"atol", o.atol},
          {"max_step", o.max_step},
          {"dt_out", o.dt_out},
          {"min_step", o.min_step}};
}

/// Throws ConfigError when a pulse list entry is malformed.
std::vector<PulseShape> read_pulses(Fields& f, std::string_view key) {
  std::vector<PulseShape> out;
  if (!f.has(key)) return out;
  const Json& arr = f.at(key);
  if (!arr.is_array()) throw ConfigError(f.path(key), "expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    Fields p(arr[i], f.path(key) + "[" + std::to_string(i) + "]");
    PulseShape s{p.number("t0"), p.number("width"), p.number("height")};
    if (!(s.width > 0.0)) throw ConfigError(p.path("width"), "must be positive");
    p.finish();
    out.push_back(s);
  }
  return out;
}

void read_recognize(RunConfig& cfg, Fields& f) {
  auto& o = cfg.recognize;
  o.singularity = parse_singularity(f.text("singularity", "hysteresis"), f.path("singularity"));
  o.y = f.number("y", o.y);
  o.u = f.number("u", o.u);
  o.parameter = f.text("parameter", o.parameter);
  o.recognition.zero_tolerance = f.positive("zero_tolerance", o.recognition.zero_tolerance);
  o.recognition.sign_tolerance = f.positive("sign_tolerance", o.recognition.sign_tolerance);
  o.recognition.relative = f.boolean("relative", o.recognition.relative);
  o.recognition.polish = f.boolean("polish", o.recognition.polish);
  o.varieties = f.boolean("varieties", o.varieties);
  if (f.has("box")) {
    Fields b(f.at("box"), f.path("box"));
    o.box.y_lo = b.number("y_lo", o.box.y_lo);
    o.box.y_hi = b.number("y_hi", o.box.y_hi);
    o.box.u_lo = b.number("u_lo", o.box.u_lo);
    o.box.u_hi = b.number("u_hi", o.box.u_hi);
    if (!(o.box.y_lo < o.box.y_hi) || !(o.box.u_lo < o.box.u_hi)) {
      throw ConfigError(f.path("box"), "needs y_lo < y_hi and u_lo < u_hi");
    }
    b.finish();
  }
  if (o.singularity == Singularity::hysteresis_unfolding &&
      !make_problem(*cfg.problem).has_parameter(o.parameter)) {
    throw ConfigError(f.path("parameter"),
                      "problem '" + cfg.problem->kind + "' has no parameter '" + o.parameter + "'");
  }
}

void read_trace(RunConfig& cfg, Fields& f) {
  auto& o = cfg.trace;
  o.u_window = window(f, "u_window", o.u_window);
  o.y_window = window(f, "y_window", o.y_window);
  o.trace.step = f.number("step", o.trace.step);
  o.trace.seed_grid = static_cast<int>(f.integer("seed_grid", o.trace.seed_grid, 3, 1000000));
  o.trace.interior_seed_lines =
      static_cast<int>(f.integer("interior_seed_lines", o.trace.interior_seed_lines, 0, 1000));
}

void read_simulate(RunConfig& cfg, Fields& f) {
  auto& o = cfg.simulate;
  const CircuitODE ode = make_circuit(*cfg.ode);
  o.t_end = f.positive("t_end", o.t_end);
  o.x0 = f.numbers("x0");
  if (!o.x0.empty() && static_cast<int>(o.x0.size()) != ode.dimension()) {
    throw ConfigError(f.path("x0"), "expected " + std::to_string(ode.dimension()) + " components");
  }
  if (f.has("signals")) {
    const Json& arr = f.at("signals");
    if (!arr.is_array()) throw ConfigError(f.path("signals"), "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = f.path("signals") + "[" + std::to_string(i) + "]";
      InputSignal s = signal_from_json(arr[i], where);
      if (s.channel() == InputChannel::alpha && !ode.accepts_alpha_input()) {
        throw ConfigError(where + ".channel", "the " + std::string(to_string(ode.kind())) +
                                                  " circuit has no alpha input");
      }
      o.signals.push_back(std::move(s));
    }
  }
  o.integrator = read_integrator(f);
  if (ode.has_fast_variable() && o.integrator.max_step > 0.5 * ode.timescales().eps_f) {
    throw ConfigError(f.path("integrator.max_step"), "must not exceed eps_f / 2");
  }
  o.classify = f.boolean("classify", o.classify);
}

void read_classify_options(ClassifyOptions& c, Fields& f) {
  if (f.has("spikes")) {
    Fields s(f.at("spikes"), f.path("spikes"));
    c.spikes.threshold = s.number("threshold", c.spikes.threshold);
    c.spikes.band = s.positive("band", c.spikes.band);
    c.spikes.refractory = s.number("refractory", c.spikes.refractory);
    c.spikes.transient = s.number("transient", c.spikes.transient);
    s.finish();
  }
  c.periodic_cv = f.positive("periodic_cv", c.periodic_cv);
  c.burst_separation = f.positive("burst_separation", c.burst_separation);
  c.min_spikes_per_burst = static_cast<std::size_t>(
      f.integer("min_spikes_per_burst", static_cast<long long>(c.min_spikes_per_burst), 1, 1000));
  c.quiescent_speed = f.positive("quiescent_speed", c.quiescent_speed);
  c.min_duration = f.number("min_duration", c.min_duration);
}

Json classify_options_json(const ClassifyOptions& c) {
  return {{"spikes",
           {{"threshold", c.spikes.threshold},
            {"band", c.spikes.band},
            {"refractory", c.spikes.refractory},
            {"transient", c.spikes.transient}}},
          {"periodic_cv", c.periodic_cv},
          {"burst_separation", c.burst_separation},
          {"min_spikes_per_burst", c.min_spikes_per_burst},
          {"quiescent_speed", c.quiescent_speed},
          {"min_duration", c.min_duration}};
}

void read_classify(RunConfig& cfg, Fields& f, const fs::path& base_dir) {
  auto& o = cfg.classify;
  fs::path p = f.text("trajectory");
  if (p.is_relative()) p = base_dir / p;
  p = fs::absolute(p).lexically_normal();
  if (!fs::is_regular_file(p)) throw ConfigError(f.path("trajectory"), "no such file " + p.string());
  o.trajectory = p;
  if (const auto r = f.range("window")) o.window = Interval{r->first, r->second};
  read_classify_options(o.classify, f);
  o.pulses = read_pulses(f, "pulses");
  o.excitability.response_window = f.positive("response_window", o.excitability.response_window);
  o.excitability.ratio = f.positive("ratio", o.excitability.ratio);
}

void check_axis_name(const RunConfig& cfg, const std::string& name, const std::string& where) {
  if (cfg.problem) {
    if (!make_problem(*cfg.problem).has_parameter(name)) {
      throw ConfigError(where, "problem '" + cfg.problem->kind + "' has no parameter '" + name + "'");
    }
    return;
  }
  if (name == "u") return;
  CircuitSpec probe = *cfg.ode;
  probe.params = probe.params.with(name, 0.0);
  try {
    make_circuit(probe);
  } catch (const DomainError&) {
    throw ConfigError(where, "circuit has no parameter '" + name + "'");
  }
}

void read_scan(RunConfig& cfg, Fields& f) {
  auto& o = cfg.scan;
  o.kind = cfg.problem ? ChartKind::static_diagrams : ChartKind::dynamic_regimes;
  const Json& axes = f.at("axes");
  if (!axes.is_array() || axes.empty() || axes.size() > 2) {
    throw ConfigError(f.path("axes"), "expected one or two axes");
  }
  for (std::size_t i = 0; i < axes.size(); ++i) {
    Fields a(axes[i], f.path("axes") + "[" + std::to_string(i) + "]");
    ScanAxis axis;
    axis.name = a.text("name");
    axis.lo = a.number("lo");
    axis.hi = a.number("hi");
    axis.resolution = static_cast<int>(a.integer("resolution", 41, 1, kMaxScanResolution));
    if (!(axis.lo <= axis.hi)) throw ConfigError(a.path("hi"), "must not be below lo");
    a.finish();
    check_axis_name(cfg, axis.name, a.path("name"));
    if (i == 1 && axis.name == o.axes[0].name) throw ConfigError(a.path("name"), "axes must differ");
    o.axes.push_back(std::move(axis));
  }
  if (o.kind == ChartKind::static_diagrams) {
    auto& s = o.static_options;
    s.u_window = window(f, "u_window", s.u_window);
    s.y_window = window(f, "y_window", s.y_window);
    s.flag_varieties = f.boolean("flag_varieties", s.flag_varieties);
    s.trace.step = f.number("step", s.trace.step);
  } else {
    o.u = f.number("u", o.u);
    auto& p = o.probe;
    if (f.has("probe")) {
      Fields pf(f.at("probe"), f.path("probe"));
      const auto mode = pf.text("mode", std::string(to_string(p.mode)));
      try {
        p.mode = parse_probe_mode(mode);
      } catch (const DomainError& e) {
        throw ConfigError(pf.path("mode"), e.what());
      }
      p.t_end = pf.number("t_end", p.t_end);
      p.ic_count = static_cast<std::size_t>(
          pf.integer("ic_count", static_cast<long long>(p.ic_count), 8, 10000));
      p.x0 = pf.numbers("x0");
      const int dim = make_circuit(*cfg.ode).dimension();
      if (!p.x0.empty() && static_cast<int>(p.x0.size()) != dim) {
        throw ConfigError(pf.path("x0"), "expected " + std::to_string(dim) + " components");
      }
      p.analysis_fraction = pf.number("analysis_fraction", p.analysis_fraction);
      if (!(p.analysis_fraction > 0.0 && p.analysis_fraction <= 1.0)) {
        throw ConfigError(pf.path("analysis_fraction"), "must lie in (0, 1]");
      }
      pf.finish();
    }
    p.integrator = read_integrator(f);
  }
  if (f.has("region")) {
    const auto label = f.text("region");
    try {
      if (o.kind == ChartKind::static_diagrams) parse_diagram_label(label);
      else parse_regime_label(label);
    } catch (const DomainError& e) {
      throw ConfigError(f.path("region"), e.what());
    }
    o.region = label;
  }
}

}  // namespace

RunConfig load_config(const Json& doc, std::optional<Command> command, const fs::path& base_dir) {
  const bool manifest = doc.is_object() && doc.contains("tool") && doc.contains("config");
  Fields f(manifest ? doc["config"] : doc, manifest ? "config" : "");

  std::optional<Command> declared;
  if (f.has("command")) declared = parse_command(f.text("command"));
  if (command && declared && *command != *declared) {
    throw ConfigError(f.path("command"),
                      "config is for '" + std::string(to_string(*declared)) + "'");
  }
  if (!command && !declared) throw ConfigError(f.path("command"), "required field is missing");

  RunConfig cfg;
  cfg.command = command ? *command : *declared;
  cfg.seed = static_cast<std::uint64_t>(
      f.integer("seed", 0, 0, std::numeric_limits<long long>::max()));
  if (f.has("problem")) cfg.problem = problem_spec_from_json(f.at("problem"), f.path("problem"));
  if (f.has("ode")) cfg.ode = circuit_spec_from_json(f.at("ode"), f.path("ode"));

  const auto name = std::string(to_string(cfg.command));
  const bool wants_problem = cfg.command == Command::recognize || cfg.command == Command::trace;
  const bool wants_ode = cfg.command == Command::simulate;
  if (wants_problem && !cfg.problem) throw ConfigError(f.path("problem"), "required by " + name);
  if (wants_ode && !cfg.ode) throw ConfigError(f.path("ode"), "required by " + name);
  if ((wants_problem || cfg.command == Command::classify) && cfg.ode) {
    throw ConfigError(f.path("ode"), "not used by " + name);
  }
  if ((wants_ode || cfg.command == Command::classify) && cfg.problem) {
    throw ConfigError(f.path("problem"), "not used by " + name);
  }
  if (cfg.command == Command::scan && cfg.problem.has_value() == cfg.ode.has_value()) {
    throw ConfigError(f.path("problem"),
                      "scan takes either a problem (static chart) or an ode (dynamic chart)");
  }

  const Json empty = Json::object();
  const bool has_options = f.has("options");
  Fields opts(has_options ? f.at("options") : empty, f.path("options"));
  switch (cfg.command) {
    case Command::recognize: read_recognize(cfg, opts); break;
    case Command::trace: read_trace(cfg, opts); break;
    case Command::simulate: read_simulate(cfg, opts); break;
    case Command::classify: read_classify(cfg, opts, base_dir); break;
    case Command::scan: read_scan(cfg, opts); break;
  }
  opts.finish();
  f.finish();
  return cfg;
}

RunConfig load_config_file(const fs::path& path, std::optional<Command> command) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("--config", std::string("malformed JSON: ") + e.what());
  }
  return load_config(doc, command, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

Json resolved_json(const RunConfig& cfg) {
  Json j;
  j["command"] = std::string(to_string(cfg.command));
  j["seed"] = cfg.seed;
  if (cfg.problem) j["problem"] = to_json(*cfg.problem);
  if (cfg.ode) j["ode"] = to_json(*cfg.ode);

  Json o = Json::object();
  switch (cfg.command) {
    case Command::recognize: {
      const auto& r = cfg.recognize;
      o["singularity"] = std::string(to_string(r.singularity));
      o["y"] = r.y;
      o["u"] = r.u;
      o["parameter"] = r.parameter;
      o["zero_tolerance"] = r.recognition.zero_tolerance;
      o["sign_tolerance"] = r.recognition.sign_tolerance;
      o["relative"] = r.recognition.relative;
      o["polish"] = r.recognition.polish;
      o["varieties"] = r.varieties;
      o["box"] = {{"y_lo", r.box.y_lo}, {"y_hi", r.box.y_hi}, {"u_lo", r.box.u_lo}, {"u_hi", r.box.u_hi}};
      break;
    }
    case Command::trace: {
      const auto& t = cfg.trace;
      o["u_window"] = {t.u_window.lo, t.u_window.hi};
      o["y_window"] = {t.y_window.lo, t.y_window.hi};
      o["step"] = t.trace.step;
      o["seed_grid"] = t.trace.seed_grid;
      o["interior_seed_lines"] = t.trace.interior_seed_lines;
      break;
    }
    case Command::simulate: {
      const auto& s = cfg.simulate;
      o["t_end"] = s.t_end;
      o["x0"] = s.x0;
      Json signals = Json::array();
      for (const auto& sig : s.signals) signals.push_back(to_json(sig));
      o["signals"] = signals;
      o["integrator"] = integrator_json(s.integrator);
      o["classify"] = s.classify;
      break;
    }
    case Command::classify: {
      const auto& c = cfg.classify;
      o["trajectory"] = c.trajectory.generic_string();
      if (c.window) o["window"] = {c.window->lo, c.window->hi};
      const Json thresholds = classify_options_json(c.classify);
      for (const auto& [k, v] : thresholds.items()) o[k] = v;
      Json pulses = Json::array();
      for (const auto& p : c.pulses) {
        pulses.push_back({{"t0", p.t0}, {"width", p.width}, {"height", p.height}});
      }
      o["pulses"] = pulses;
      o["response_window"] = c.excitability.response_window;
      o["ratio"] = c.excitability.ratio;
      break;
    }
    case Command::scan: {
      const auto& s = cfg.scan;
      Json axes = Json::array();
      for (const auto& a : s.axes) {
        axes.push_back({{"name", a.name}, {"lo", a.lo}, {"hi", a.hi}, {"resolution", a.resolution}});
      }
      o["axes"] = axes;
      if (s.kind == ChartKind::static_diagrams) {
        o["u_window"] = {s.static_options.u_window.lo, s.static_options.u_window.hi};
        o["y_window"] = {s.static_options.y_window.lo, s.static_options.y_window.hi};
        o["flag_varieties"] = s.static_options.flag_varieties;
        o["step"] = s.static_options.trace.step;
      } else {
        o["u"] = s.u;
        o["probe"] = {{"mode", std::string(to_string(s.probe.mode))},
                      {"t_end", s.probe.t_end},
                      {"ic_count", s.probe.ic_count},
                      {"x0", s.probe.x0},
                      {"analysis_fraction", s.probe.analysis_fraction}};
        o["integrator"] = integrator_json(s.probe.integrator);
      }
      if (s.region) o["region"] = *s.region;
      break;
    }
  }
  j["options"] = o;
  return j;
}

}  // namespace octk::cli
