#include "delaywave/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "delaywave/errors.hpp"

namespace delaywave {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         std::string_view where) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key \"" + key + "\" in " + std::string(where));
    }
  }
}

template <typename T>
T required(const json& obj, const char* key, std::string_view where) {
  if (!obj.contains(key)) {
    throw ConfigError("missing key \"" + std::string(key) + "\" in " + std::string(where));
  }
  if constexpr (std::is_integral_v<T>) {
    if (!obj.at(key).is_number_integer()) {
      throw ConfigError("\"" + std::string(key) + "\" must be an integer");
    }
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for \"" + std::string(key) + "\": " + e.what());
  }
}

Profile profile_from_json(const json& arr, std::string_view where) {
  if (!arr.is_array()) throw ConfigError(std::string(where) + " must be an array of terms");
  Profile p;
  for (const auto& term : arr) {
    if (term.contains("shape")) {
      reject_unknown_keys(term, {"shape", "amp"}, where);
      const auto shape = required<std::string>(term, "shape", where);
      if (shape != "sin2") throw ConfigError("unknown profile shape \"" + shape + "\"");
      p.terms.emplace_back(SineSquared{required<double>(term, "amp", where)});
    } else {
      reject_unknown_keys(term, {"lo", "hi", "amp"}, where);
      p.terms.emplace_back(Interval{required<double>(term, "lo", where),
                                    required<double>(term, "hi", where),
                                    required<double>(term, "amp", where)});
    }
  }
  return p;
}

json profile_to_json(const Profile& p) {
  json arr = json::array();
  for (const auto& term : p.terms) {
    if (const auto* iv = std::get_if<Interval>(&term)) {
      arr.push_back({{"lo", iv->lo}, {"hi", iv->hi}, {"amp", iv->amp}});
    } else {
      arr.push_back({{"shape", "sin2"}, {"amp", std::get<SineSquared>(term).amp}});
    }
  }
  return arr;
}

InitialData init_from_json(const json& obj) {
  reject_unknown_keys(obj, {"preset", "u0", "u1", "y0", "y1", "f0"}, "init");
  InitialData init;
  if (obj.contains("preset")) {
    if (obj.size() != 1) throw ConfigError("init: \"preset\" cannot be combined with other keys");
    const auto name = required<std::string>(obj, "preset", "init");
    if (name != "paper") throw ConfigError("init: unknown preset \"" + name + "\"");
    return init;
  }
  const int present = static_cast<int>(obj.contains("u0")) + obj.contains("u1") +
                      obj.contains("y0") + obj.contains("y1");
  if (present == 4) {
    init.fields = NodalFields{required<std::vector<double>>(obj, "u0", "init"),
                              required<std::vector<double>>(obj, "u1", "init"),
                              required<std::vector<double>>(obj, "y0", "init"),
                              required<std::vector<double>>(obj, "y1", "init")};
  } else if (present != 0) {
    throw ConfigError("init: give all of u0, u1, y0, y1 or none of them");
  }
  if (obj.contains("f0")) {
    const auto& f0 = obj.at("f0");
    if (f0.is_string()) {
      if (f0.get<std::string>() != "paper-exp") {
        throw ConfigError("init: unknown f0 preset \"" + f0.get<std::string>() + "\"");
      }
    } else {
      init.history = required<std::vector<std::vector<double>>>(obj, "f0", "init");
    }
  }
  return init;
}

json init_to_json(const InitialData& init) {
  if (init.is_paper_preset()) return {{"preset", "paper"}};
  json obj = json::object();
  if (init.fields) {
    obj["u0"] = init.fields->u0;
    obj["u1"] = init.fields->u1;
    obj["y0"] = init.fields->y0;
    obj["y1"] = init.fields->y1;
  }
  obj["f0"] = init.history ? json(*init.history) : json("paper-exp");
  return obj;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

std::string snapshot_name(std::int64_t n) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "fields_step%06lld.csv", static_cast<long long>(n));
  return buf;
}

}  // namespace

SimulationConfig config_from_json(const json& doc) {
  constexpr std::string_view where = "config";
  reject_unknown_keys(
      doc, {"mu1", "mu2", "tau", "xi", "N", "dt", "T", "a", "b", "init", "snapshot_stride"},
      where);
  SimulationConfig cfg;
  cfg.mu1 = required<double>(doc, "mu1", where);
  cfg.mu2 = required<double>(doc, "mu2", where);
  cfg.tau = required<double>(doc, "tau", where);
  cfg.xi = required<double>(doc, "xi", where);
  cfg.N = required<int>(doc, "N", where);
  cfg.dt = required<double>(doc, "dt", where);
  cfg.T = required<double>(doc, "T", where);
  if (!doc.contains("a")) throw ConfigError("missing key \"a\" in config");
  if (!doc.contains("b")) throw ConfigError("missing key \"b\" in config");
  cfg.a = profile_from_json(doc.at("a"), "a");
  cfg.b = profile_from_json(doc.at("b"), "b");
  if (doc.contains("init")) cfg.init = init_from_json(doc.at("init"));
  if (doc.contains("snapshot_stride")) {
    cfg.snapshot_stride = required<std::int64_t>(doc, "snapshot_stride", where);
  }
  return cfg;
}

json config_to_json(const SimulationConfig& cfg) {
  return {{"mu1", cfg.mu1},
          {"mu2", cfg.mu2},
          {"tau", cfg.tau},
          {"xi", cfg.xi},
          {"N", cfg.N},
          {"dt", cfg.dt},
          {"T", cfg.T},
          {"a", profile_to_json(cfg.a)},
          {"b", profile_to_json(cfg.b)},
          {"init", init_to_json(cfg.init)},
          {"snapshot_stride", cfg.snapshot_stride}};
}

SimulationConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

json conditions_to_json(const ConditionReport& r) {
  json obj = {{"mu_condition_holds", r.mu_condition_holds},
              {"xi_admissible", r.xi_admissible},
              {"coupling_inside_damping", r.coupling_inside_damping},
              {"cfl", r.cfl},
              {"dx", r.dx},
              {"delay_steps", r.delay_steps},
              {"total_steps", r.total_steps}};
  obj["xi_interval"] =
      r.xi_interval ? json::array({r.xi_interval->first, r.xi_interval->second}) : json(nullptr);
  return obj;
}

json summary_json(const RunReport& report) {
  const double e0 = report.energies.empty() ? 0.0 : report.energies.front().e_total;
  const double ef = report.energies.empty() ? 0.0 : report.energies.back().e_total;
  const double dx = report.conditions.dx;
  json obj = {{"classification", std::string(to_string(report.classification))},
              {"fit_window", {report.fit_window.first, report.fit_window.second}},
              {"max_violation", report.max_violation},
              {"violation_count", report.violation_count},
              {"energy_records", report.energies.size()},
              {"last_level", report.last_level},
              {"E0", e0},
              {"E_final", ef},
              {"E0_dx_scaled", e0 * dx},
              {"E_final_dx_scaled", ef * dx},
              {"conditions", conditions_to_json(report.conditions)},
              {"warnings", report.warnings},
              {"config", config_to_json(report.config)}};
  obj["fitted_rate"] = report.fitted_rate ? json(*report.fitted_rate) : json(nullptr);
  obj["fitted_intercept"] =
      report.fitted_intercept ? json(*report.fitted_intercept) : json(nullptr);
  return obj;
}

SimulationConfig paper_stable(int N) {
  SimulationConfig cfg;
  cfg.mu1 = 1.0;
  cfg.mu2 = 0.5;
  cfg.tau = 2.0;
  cfg.xi = cfg.mu1 * cfg.tau;
  cfg.N = N;
  cfg.dt = 0.01;
  cfg.T = 500.0;
  cfg.a = Profile::indicator({{0.1, 0.2}, {0.8, 0.9}});
  cfg.b = Profile::indicator({{0.1, 0.2}});
  cfg.init = InitialData{};
  return cfg;
}

SimulationConfig paper_unstable(int N) {
  auto cfg = paper_stable(N);
  cfg.mu2 = 1.2;
  cfg.xi = 0.0;
  return cfg;
}

std::vector<double> paper_sweep_values() { return {0.0, 0.25, 0.5, 0.75}; }

std::optional<ScenarioPreset> find_preset(std::string_view name) {
  if (name == "paper-stable") return ScenarioPreset{"paper-stable", paper_stable(9), {}};
  if (name == "paper-stable-n10") return ScenarioPreset{"paper-stable-n10", paper_stable(10), {}};
  if (name == "paper-unstable") return ScenarioPreset{"paper-unstable", paper_unstable(9), {}};
  if (name == "paper-unstable-n10") {
    return ScenarioPreset{"paper-unstable-n10", paper_unstable(10), {}};
  }
  if (name == "paper-sweep") {
    return ScenarioPreset{"paper-sweep", paper_stable(9), paper_sweep_values()};
  }
  return std::nullopt;
}

std::vector<std::string> preset_names() {
  return {"paper-stable", "paper-stable-n10", "paper-unstable", "paper-unstable-n10",
          "paper-sweep"};
}

void write_energy_csv(std::ostream& out, const RunReport& report) {
  out << "step,t,E_total,E_kin_u,E_pot_u,E_kin_y,E_pot_y,E_delay,delta,identity_rhs,bound_rhs,"
         "violation_flag\n";
  const double dt = report.config.dt;
  for (std::size_t i = 0; i < report.energies.size(); ++i) {
    const auto& e = report.energies[i];
    out << e.n << ',' << format_real(static_cast<double>(e.n) * dt) << ','
        << format_real(e.e_total) << ',' << format_real(e.e_kin_u) << ','
        << format_real(e.e_pot_u) << ',' << format_real(e.e_kin_y) << ','
        << format_real(e.e_pot_y) << ',' << format_real(e.e_delay) << ',';
    // audits[i - 1] covers the transition into E^i; E^0 has none.
    if (i == 0 || i - 1 >= report.audits.size()) {
      out << ",,,0\n";
    } else {
      const auto& a = report.audits[i - 1];
      out << format_real(a.delta) << ',' << format_real(a.identity_rhs) << ','
          << format_real(a.bound_rhs) << ',' << (a.violation ? 1 : 0) << '\n';
    }
  }
}

void write_snapshot_csv(std::ostream& out, const std::vector<double>& x, const Snapshot& snap) {
  out << "x,u,y\n";
  for (std::size_t j = 0; j < x.size(); ++j) {
    out << format_real(x[j]) << ',' << format_real(snap.u[j]) << ',' << format_real(snap.y[j])
        << '\n';
  }
}

void write_sweep_summary_csv(std::ostream& out, std::span<const RunReport> reports) {
  out << "mu2,xi,classification,fitted_rate,E0,E_final,max_violation\n";
  for (const auto& r : reports) {
    const double e0 = r.energies.empty() ? 0.0 : r.energies.front().e_total;
    const double ef = r.energies.empty() ? 0.0 : r.energies.back().e_total;
    out << format_real(r.config.mu2) << ',' << format_real(r.config.xi) << ','
        << to_string(r.classification) << ','
        << (r.fitted_rate ? format_real(*r.fitted_rate) : std::string()) << ','
        << format_real(e0) << ',' << format_real(ef) << ',' << format_real(r.max_violation)
        << '\n';
  }
}

EnergyCurve energy_curve(const RunReport& report, std::string label) {
  EnergyCurve curve{std::move(label), {}, {}};
  curve.t.reserve(report.energies.size());
  curve.energy.reserve(report.energies.size());
  for (const auto& e : report.energies) {
    curve.t.push_back(static_cast<double>(e.n) * report.config.dt);
    curve.energy.push_back(e.e_total);
  }
  return curve;
}

std::string energy_svg(std::span<const EnergyCurve> curves) {
  constexpr double width = 800, height = 500, left = 70, right = 160, top = 30, bottom = 50;
  constexpr std::size_t max_points = 2000;
  static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                            "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  double t_min = 0.0, t_max = 1.0, l_min = 0.0, l_max = 1.0;
  bool any = false;
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.t.size(); ++i) {
      if (!(c.energy[i] > 0.0) || !std::isfinite(c.energy[i])) continue;
      const double l = std::log10(c.energy[i]);
      if (!any) {
        t_min = t_max = c.t[i];
        l_min = l_max = l;
        any = true;
      }
      t_min = std::min(t_min, c.t[i]);
      t_max = std::max(t_max, c.t[i]);
      l_min = std::min(l_min, l);
      l_max = std::max(l_max, l);
    }
  }
  l_min = std::floor(l_min);
  l_max = std::ceil(l_max);
  if (l_max <= l_min) l_max = l_min + 1.0;
  if (t_max <= t_min) t_max = t_min + 1.0;

  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double t) { return left + (t - t_min) / (t_max - t_min) * pw; };
  auto py = [&](double l) { return top + (l_max - l) / (l_max - l_min) * ph; };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double decade_step = std::max(1.0, std::ceil((l_max - l_min) / 10.0));
  for (double l = l_min; l <= l_max; l += decade_step) {
    svg << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << num(py(l))
        << "\" y2=\"" << num(py(l)) << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << num(py(l) + 4)
        << "\" text-anchor=\"end\">1e" << static_cast<int>(l) << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double t = t_min + (t_max - t_min) * i / 5.0;
    svg << "<text x=\"" << num(px(t)) << "\" y=\"" << top + ph + 18
        << "\" text-anchor=\"middle\">" << num(t) << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">t</text>\n";
  svg << "<text x=\"15\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 15 " << top + ph / 2
      << ")\" text-anchor=\"middle\">E(t)</text>\n";

  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& c = curves[ci];
    const char* color = palette[ci % std::size(palette)];
    const std::size_t stride = std::max<std::size_t>(1, c.t.size() / max_points);
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < c.t.size(); i += stride) {
      if (!(c.energy[i] > 0.0) || !std::isfinite(c.energy[i])) continue;
      svg << num(px(c.t[i])) << ',' << num(py(std::log10(c.energy[i]))) << ' ';
    }
    svg << "\"/>\n";
    const double ly = top + 15.0 + 18.0 * static_cast<double>(ci);
    svg << "<line x1=\"" << left + pw + 10 << "\" x2=\"" << left + pw + 30 << "\" y1=\"" << ly
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + pw + 35 << "\" y=\"" << ly + 4 << "\">" << c.label
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<fs::path> write_outputs(const RunReport& report, const fs::path& dir, bool plot) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  std::vector<fs::path> manifest;
  {
    const auto path = dir / "energy.csv";
    auto out = open_output(path);
    write_energy_csv(out, report);
    finish(out, path);
    manifest.push_back(path);
  }
  {
    const auto path = dir / "summary.json";
    auto out = open_output(path);
    out << summary_json(report).dump(2) << '\n';
    finish(out, path);
    manifest.push_back(path);
  }
  for (const auto& snap : report.snapshots) {
    const auto path = dir / snapshot_name(snap.n);
    auto out = open_output(path);
    write_snapshot_csv(out, report.x, snap);
    finish(out, path);
    manifest.push_back(path);
  }
  if (plot) {
    const auto path = dir / "energy.svg";
    const EnergyCurve curve = energy_curve(
        report, "mu2=" + format_real(report.config.mu2));
    auto out = open_output(path);
    out << energy_svg(std::span(&curve, 1));
    finish(out, path);
    manifest.push_back(path);
  }
  return manifest;
}

std::vector<fs::path> write_sweep_outputs(std::span<const RunReport> reports, const fs::path& dir,
                                          bool plot) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  std::vector<fs::path> manifest;
  std::vector<EnergyCurve> curves;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "run_%03zu_mu2_%s", i,
                  format_real(reports[i].config.mu2).c_str());
    const auto sub = write_outputs(reports[i], dir / name, plot);
    manifest.insert(manifest.end(), sub.begin(), sub.end());
    if (plot) curves.push_back(energy_curve(reports[i], "mu2=" + format_real(reports[i].config.mu2)));
  }
  {
    const auto path = dir / "sweep_summary.csv";
    auto out = open_output(path);
    write_sweep_summary_csv(out, reports);
    finish(out, path);
    manifest.push_back(path);
  }
  if (plot) {
    const auto path = dir / "energy.svg";
    auto out = open_output(path);
    out << energy_svg(curves);
    finish(out, path);
    manifest.push_back(path);
  }
  return manifest;
}

}  // namespace delaywave
