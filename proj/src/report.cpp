#include "varlp/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace varlp {

namespace {

using ojson = nlohmann::ordered_json;

// %.17g for finite doubles; non-finite values become the strings
// "inf", "-inf" and "nan" since JSON has no literal for them.
void write_number(std::ostream& os, double x) {
  if (std::isnan(x)) {
    os << "\"nan\"";
  } else if (std::isinf(x)) {
    os << (x > 0 ? "\"inf\"" : "\"-inf\"");
  } else {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
  }
}

void write(std::ostream& os, const ojson& j, int indent) {
  const std::string pad(2 * (indent + 1), ' '), close(2 * indent, ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << ojson(k).dump() << ": ";
        write(os, v, indent + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write(os, j[i], indent + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    case ojson::value_t::number_float:
      write_number(os, j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

std::string number_text(double x) {
  std::ostringstream os;
  write_number(os, x);
  std::string s = os.str();
  if (!s.empty() && s.front() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

// Doubles that may be non-finite go through this so the writer sees a float.
ojson num(double x) { return ojson(x); }

ojson geometry_json(const GeometryReport& g) {
  ojson j;
  j["a0"] = num(g.a0);
  j["a0_witness"] = {g.a0_witness.first, g.a0_witness.second};
  j["a1"] = num(g.a1);
  j["a1_witness"] = {g.a1_witness[0], g.a1_witness[1], g.a1_witness[2]};
  j["a1_sampled"] = g.a1_sampled;
  j["doubling_c"] = num(g.doubling_c);
  j["rdc_A"] = num(g.rdc_A);
  j["rdc_B"] = num(g.rdc_B);
  j["ahlfors_exponent"] = num(g.ahlfors_exponent);
  j["ahlfors_upper_c1"] = num(g.ahlfors_upper_c1);
  j["ahlfors_lower_c2"] = num(g.ahlfors_lower_c2);
  j["annuli_nonempty"] = g.annuli_nonempty;
  return j;
}

std::string curve_file(const std::string& name) { return name + "_curve.csv"; }

}  // namespace

std::string report_json(const RunResult& result) {
  const Scenario& s = result.scenario;
  ojson root;
  ojson meta;
  meta["tool"] = "varlp";
  meta["format_version"] = 1;
  meta["scenario"] = s.name;
  meta["operator"] = std::string(to_string(s.op));
  meta["seed"] = s.seed;
  meta["resolutions"] = s.resolutions;
  root["meta"] = meta;
  root["scenario"] = ojson::parse(scenario_to_json(s));
  root["geometry"] = result.geometry ? geometry_json(*result.geometry) : ojson(nullptr);

  ojson conds = ojson::array();
  for (const auto& c : result.conditions) {
    ojson j;
    j["name"] = c.name;
    j["value"] = num(c.value);
    j["argmax_t"] = num(c.argmax_t);
    j["curve_ref"] = c.curve.empty() ? ojson(nullptr) : ojson(curve_file(c.name));
    j["resolution"] = c.resolution;
    j["finite_hint"] = std::string(to_string(c.finite_hint));
    j["dropped_terms"] = c.dropped_terms;
    j["warnings"] = c.warnings;
    conds.push_back(j);
  }
  root["conditions"] = conds;

  if (result.ratio) {
    ojson r;
    r["value"] = num(result.ratio->ratio);
    if (!result.ratio->best_label.empty()) r["best_probe"] = result.ratio->best_label;
    r["trials"] = result.ratio->trials;
    root["ratio"] = r;
  }
  if (result.study) {
    const StudyReport& st = *result.study;
    ojson j;
    j["resolutions"] = st.resolutions;
    ojson values = ojson::object(), trend = ojson::object();
    for (const auto& [name, vals] : st.condition_values) {
      ojson arr = ojson::array();
      for (double v : vals) arr.push_back(num(v));
      values[name] = arr;
      trend[name] = std::string(to_string(st.condition_trend.at(name)));
    }
    j["condition_values"] = values;
    ojson ratios = ojson::array();
    for (double v : st.ratios) ratios.push_back(num(v));
    j["ratios"] = ratios;
    if (!st.ratios.empty()) trend["ratio"] = std::string(to_string(st.ratio_trend));
    j["trend"] = trend;
    root["study"] = j;
  }
  std::ostringstream os;
  write(os, root, 0);
  os << "\n";
  return os.str();
}

std::string curve_csv(const ConditionReport& report) {
  std::string out = "t,value\n";
  for (const auto& [t, v] : report.curve) out += number_text(t) + "," + number_text(v) + "\n";
  return out;
}

std::string study_csv(const StudyReport& study) {
  std::string out = "resolution,metric,value\n";
  for (const auto& [name, vals] : study.condition_values)
    for (std::size_t i = 0; i < vals.size(); ++i)
      out += std::to_string(study.resolutions[i]) + "," + name + "," + number_text(vals[i]) + "\n";
  for (std::size_t i = 0; i < study.ratios.size(); ++i)
    out += std::to_string(study.resolutions[i]) + ",ratio," + number_text(study.ratios[i]) + "\n";
  return out;
}

std::vector<std::filesystem::path> emit_report(const RunResult& result,
                                               const std::filesystem::path& dir,
                                               ReportFormat format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& file, const std::string& text) {
    const auto path = dir / file;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed for " + path.string());
    written.push_back(path);
  };
  if (format != ReportFormat::csv) put("report.json", report_json(result));
  if (format != ReportFormat::json) {
    for (const auto& c : result.conditions)
      if (!c.curve.empty()) put(curve_file(c.name), curve_csv(c));
    if (result.study) put("study.csv", study_csv(*result.study));
  }
  return written;
}

}  // namespace varlp
