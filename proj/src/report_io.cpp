#include "rpnflat/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace rpnflat {

using nlohmann::json;

namespace {

json exponents(const MultiIndex& m) { return json(std::vector<int>(m.exponents().begin(), m.exponents().end())); }

json thresholds_json(const Thresholds& th) {
  return {{"growth_factor", th.growth_factor},
          {"abs_floor", th.abs_floor},
          {"decay_ceiling", th.decay_ceiling},
          {"growth_exponent", th.growth_exponent}};
}

json affine_json(const AffinePoint& p) {
  return {{"chart", p.chart().index()},
          {"coords", std::vector<double>(p.coords().begin(), p.coords().end())}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// %.17g keeps CSV values round-trippable.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const MultiIndex& m) { return "\"" + m.to_string() + "\""; }

void flatness_rows_csv(std::ostringstream& os, const FlatnessReport& r, const std::string& prefix) {
  for (const auto& row : r.rows) {
    for (std::size_t m = 0; m < row.level_sups.size(); ++m) {
      const auto& lvl = r.levels[m];
      os << prefix << row.p << ',' << quoted(row.alpha) << ',' << lvl.level << ','
         << num(lvl.band_lo) << ',' << num(lvl.band_hi) << ','
         << (row.level_sups[m] ? num(*row.level_sups[m]) : std::string()) << ','
         << row.non_finite[m] << '\n';
    }
  }
}

}  // namespace

json to_json(const SeminormReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"alpha", exponents(row.alpha)},
                    {"beta", exponents(row.beta)},
                    {"sups", row.sups},
                    {"verdict", std::string(to_string(row.verdict))}});
  }
  json out{{"schema", "rpnflat.seminorm_report/1"},
           {"function", report.function},
           {"dim", report.dim},
           {"max_alpha", report.config.max_alpha},
           {"max_beta", report.config.max_beta},
           {"radii", report.config.radii},
           {"points_per_axis", report.points_per_axis},
           {"thresholds", thresholds_json(report.config.thresholds)},
           {"sups_are_lower_bounds", true},
           {"non_finite_samples", report.non_finite},
           {"rows", std::move(rows)},
           {"verdict", std::string(to_string(report.verdict))}};
  if (auto expected = expected_class(report.function)) {
    out["expected_class"] = std::string(to_string(*expected));
  }
  return out;
}

json to_json(const FlatnessReport& report) {
  const auto& s = report.spec;
  json levels = json::array();
  for (const auto& l : report.levels) {
    levels.push_back({{"level", l.level}, {"band_lo", l.band_lo}, {"band_hi", l.band_hi},
                      {"samples", l.samples}});
  }
  json rows = json::array();
  for (const auto& row : report.rows) {
    json sups = json::array();
    for (const auto& q : row.level_sups) sups.push_back(optional_json(q));
    rows.push_back({{"p", row.p},
                    {"alpha", exponents(row.alpha)},
                    {"level_sups", std::move(sups)},
                    {"non_finite", row.non_finite},
                    {"verdict", std::string(to_string(row.verdict))}});
  }
  return {{"schema", "rpnflat.flatness_report/1"},
          {"function", report.function},
          {"spec",
           {{"source_chart", s.source.index()},
            {"target_chart", s.target.index()},
            {"base_point", s.base_point},
            {"radius", s.radius},
            {"max_weight", s.max_weight},
            {"max_order", s.max_order},
            {"levels", s.levels},
            {"samples_per_level", s.samples_per_level},
            {"seed", s.seed},
            {"thresholds", thresholds_json(s.thresholds)}}},
          {"levels", std::move(levels)},
          {"rows", std::move(rows)},
          {"verdict", std::string(to_string(report.verdict))}};
}

json to_json(const ExtensionReport& report) {
  json entries = json::array();
  json table = json::array();
  for (const auto& e : report.entries) {
    table.push_back({{"target_chart", e.target.index()},
                     {"base_index", e.base_index},
                     {"base_point", e.report.spec.base_point},
                     {"verdict", std::string(to_string(e.report.verdict))}});
    entries.push_back(to_json(e.report));
  }
  return {{"schema", "rpnflat.extension_report/1"},
          {"function", report.function},
          {"dim", report.dim},
          {"source_chart", report.source.index()},
          {"summary", std::move(table)},
          {"entries", std::move(entries)},
          {"verdict", std::string(to_string(report.verdict))}};
}

json to_json(const TransportMatrix& matrix) {
  json rows = json::array();
  for (std::size_t r = 0; r < matrix.dim; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < matrix.dim; ++c) row.push_back(matrix(r, c));
    rows.push_back(std::move(row));
  }
  return {{"schema", "rpnflat.transport_matrix/1"},
          {"source_chart", matrix.source.index()},
          {"target_chart", matrix.target.index()},
          {"point", affine_json(matrix.point)},
          {"matrix", std::move(rows)}};
}

json to_json(const DerivativeTable& table) {
  json rows = json::array();
  for (std::size_t k = 0; k < table.indices.size(); ++k) {
    rows.push_back({{"alpha", exponents(table.indices[k])}, {"value", table.values[k]}});
  }
  return {{"schema", "rpnflat.derivative_table/1"},
          {"source_chart", table.source.index()},
          {"point", affine_json(table.point)},
          {"order", table.order},
          {"boundary_axis", table.boundary_axis + 1},
          {"rows", std::move(rows)}};
}

json to_json(const std::vector<AtlasCheck>& checks) {
  json rows = json::array();
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.passed;
    rows.push_back({{"check", c.name},
                    {"dim", c.dim},
                    {"cases", c.cases},
                    {"max_error", c.max_error},
                    {"tolerance", c.tolerance},
                    {"passed", c.passed}});
  }
  return {{"schema", "rpnflat.atlas_check/1"}, {"checks", std::move(rows)}, {"passed", all}};
}

std::string to_csv(const SeminormReport& report) {
  std::ostringstream os;
  os << "alpha,beta,annulus,r_inner,r_outer,sup\n";
  for (const auto& row : report.rows) {
    double inner = 0.0;
    for (std::size_t k = 0; k < row.sups.size(); ++k) {
      const double outer = report.config.radii[k];
      os << quoted(row.alpha) << ',' << quoted(row.beta) << ',' << k + 1 << ',' << num(inner) << ','
         << num(outer) << ',' << num(row.sups[k]) << '\n';
      inner = outer;
    }
  }
  return os.str();
}

std::string to_csv(const FlatnessReport& report) {
  std::ostringstream os;
  os << "p,alpha,level,band_lo,band_hi,sup,non_finite\n";
  flatness_rows_csv(os, report, "");
  return os.str();
}

std::string to_csv(const ExtensionReport& report) {
  std::ostringstream os;
  os << "target_chart,base_index,p,alpha,level,band_lo,band_hi,sup,non_finite\n";
  for (const auto& e : report.entries) {
    flatness_rows_csv(os, e.report,
                      std::to_string(e.target.index()) + "," + std::to_string(e.base_index) + ",");
  }
  return os.str();
}

void write_atomically(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw std::runtime_error("cannot move report into place at " + path.string() + ": " + ec.message());
  }
}

}  // namespace rpnflat
