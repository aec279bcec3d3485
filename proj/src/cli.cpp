#include "rpnflat/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "rpnflat/derivative_transport.hpp"
#include "rpnflat/projective_atlas.hpp"
#include "rpnflat/report_io.hpp"

namespace rpnflat::cli {

namespace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ScalarField require_field(const RunConfig& c) {
  if (c.function.empty()) throw ConfigError("--function is required");
  auto f = find_field(c.function, c.dim);
  if (!f) {
    std::string known;
    for (const auto& name : field_names()) known += " " + name;
    throw ConfigError("unknown function '" + c.function + "' for n = " + std::to_string(c.dim) +
                      "; known:" + known);
  }
  return *f;
}

void validate(const RunConfig& c) {
  if (c.dim < 1 || c.dim > 6) throw ConfigError("--n must lie in [1, 6]");
  if (c.order < 0 || c.order > 6) throw ConfigError("--order must lie in [0, 6]");
  if (c.max_alpha < 0 || c.max_alpha > 6 || c.max_beta < 0 || c.max_beta > 6) {
    throw ConfigError("--max-alpha / --max-beta must lie in [0, 6]");
  }
  if (c.max_weight < 0 || c.max_weight > 12) throw ConfigError("--max-weight must lie in [0, 12]");
  if (c.levels < 1 || c.levels > 60) throw ConfigError("--levels must lie in [1, 60]");
  if (c.samples < 0) throw ConfigError("--samples must be >= 0");
  if (c.workers < 1 || c.workers > 256) throw ConfigError("--workers must lie in [1, 256]");
  if (c.format != "json" && c.format != "csv") throw ConfigError("--format must be json or csv");
  for (std::size_t n : c.dims) {
    if (n < 1 || n > 6) throw ConfigError("--dims entries must lie in [1, 6]");
  }
}

Thresholds thresholds(const RunConfig& c) { return c.thresholds; }

FlatnessSpec flatness_spec(const RunConfig& c) {
  FlatnessSpec s;
  s.source = ChartId(c.source);
  s.target = ChartId(c.target);
  s.radius = c.radius;
  s.max_weight = c.max_weight;
  s.max_order = c.order;
  s.levels = c.levels;
  s.samples_per_level = c.samples;
  s.seed = c.seed;
  s.thresholds = thresholds(c);
  return s;
}

struct Output {
  std::string text;
  int status = kOk;
};

Output emit_json(const nlohmann::json& j) { return {j.dump(2) + "\n", kOk}; }

int check_status(bool requested, bool matches) { return requested && !matches ? kVerdictMismatch : kOk; }

std::optional<SchwartzClass> checked_expectation(const RunConfig& c) {
  if (!c.check) return std::nullopt;
  auto e = expected_class(c.function);
  if (!e) throw ConfigError("--check needs a function with a known expected class");
  return e;
}

Output run_classify(const RunConfig& c) {
  const auto f = require_field(c);
  const auto expected = checked_expectation(c);
  ClassifyConfig cfg;
  cfg.max_alpha = c.max_alpha;
  cfg.max_beta = c.max_beta;
  cfg.radii = c.radii;
  cfg.points_per_axis = c.points_per_axis;
  cfg.thresholds = thresholds(c);
  cfg.workers = c.workers;
  const auto report = classify_schwartz(f, cfg);
  Output out{c.format == "csv" ? to_csv(report) : to_json(report).dump(2) + "\n"};
  if (expected) {
    const auto want = *expected == SchwartzClass::Schwartz ? SchwartzVerdict::SchwartzConsistent
                                                           : SchwartzVerdict::NotSchwartz;
    out.status = check_status(true, report.verdict == want);
  }
  return out;
}

Output run_seminorm(const RunConfig& c) {
  const auto f = require_field(c);
  const std::vector<int> zeros(c.dim, 0);
  const MultiIndex alpha(c.alpha.empty() ? zeros : c.alpha);
  const MultiIndex beta(c.beta.empty() ? zeros : c.beta);
  if (alpha.dim() != c.dim || beta.dim() != c.dim) throw ConfigError("--alpha/--beta need n entries");
  if (c.range.size() != 2) throw ConfigError("--range takes lo,hi");
  SamplingGrid grid = SamplingGrid::cube(c.dim, c.range[0], c.range[1],
                                         c.points_per_axis ? c.points_per_axis : 2001);
  if (!c.annulus.empty()) {
    if (c.annulus.size() != 2) throw ConfigError("--annulus takes lo,hi");
    grid.annulus = {c.annulus[0], c.annulus[1]};
  }
  const double value = estimate_seminorm(f, alpha, beta, grid, c.workers);
  nlohmann::json j{{"schema", "rpnflat.seminorm_estimate/1"},
                   {"function", f.name()},
                   {"dim", c.dim},
                   {"alpha", c.alpha.empty() ? zeros : c.alpha},
                   {"beta", c.beta.empty() ? zeros : c.beta},
                   {"range", c.range},
                   {"points_per_axis", grid.points_per_axis},
                   {"value", value},
                   {"is_lower_bound", true}};
  if (grid.annulus) j["annulus"] = c.annulus;
  return emit_json(j);
}

bool flat_matches(SchwartzClass expected, FlatVerdict got) {
  return expected == SchwartzClass::Schwartz ? got == FlatVerdict::FlatConsistent
                                             : got == FlatVerdict::Diverging;
}

Output run_flatness(const RunConfig& c) {
  const auto f = require_field(c);
  const auto expected = checked_expectation(c);
  auto spec = flatness_spec(c);
  spec.base_point = c.base_point.empty() ? std::vector<double>(c.dim, 0.0) : c.base_point;
  const auto report = verify_flatness(f, spec, c.workers);
  Output out{c.format == "csv" ? to_csv(report) : to_json(report).dump(2) + "\n"};
  if (expected) out.status = check_status(true, flat_matches(*expected, report.verdict));
  return out;
}

Output run_extend(const RunConfig& c) {
  const auto f = require_field(c);
  const auto expected = checked_expectation(c);
  ExtensionConfig cfg;
  cfg.source = ChartId(c.source);
  cfg.base_points = c.base_points;
  cfg.base_spread = c.spread;
  cfg.flatness = flatness_spec(c);
  cfg.workers = c.workers;
  const auto report = extension_report(f, cfg);
  Output out{c.format == "csv" ? to_csv(report) : to_json(report).dump(2) + "\n"};
  if (expected) out.status = check_status(true, flat_matches(*expected, report.verdict));
  return out;
}

Output run_transport(const RunConfig& c) {
  if (c.point.size() != c.dim) throw ConfigError("--point needs n comma-separated coordinates");
  const AffinePoint t(ChartId(c.target), c.point);
  if (c.function.empty()) return emit_json(to_json(first_order_matrix(ChartId(c.source), t)));
  const auto f = require_field(c);
  return emit_json(to_json(pushforward_derivatives(f, ChartId(c.source), t, c.order)));
}

Output run_stereo(const RunConfig& c) {
  if (c.point.empty() == c.sphere_point.empty()) {
    throw ConfigError("stereo takes exactly one of --point (plane to sphere) or --sphere-point");
  }
  if (!c.sphere_point.empty()) {
    const SpherePoint p(c.sphere_point);
    return emit_json({{"schema", "rpnflat.stereo/1"},
                      {"sphere_point", c.sphere_point},
                      {"plane_point", stereo(p)}});
  }
  const auto p = stereo_inverse(c.point);
  return emit_json({{"schema", "rpnflat.stereo/1"},
                    {"plane_point", c.point},
                    {"sphere_point", std::vector<double>(p.coords().begin(), p.coords().end())}});
}

Output run_atlas_check(const RunConfig& c) {
  AtlasCheckConfig cfg;
  cfg.dims = c.dims;
  cfg.samples = c.atlas_samples;
  cfg.seed = c.seed;
  const auto checks = run_atlas_checks(cfg);
  bool all = true;
  for (const auto& ch : checks) all = all && ch.passed;
  Output out = emit_json(to_json(checks));
  out.status = all ? kOk : kVerdictMismatch;
  return out;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Output result;
  try {
    validate(config);
    const auto& cmd = config.subcommand;
    if (config.format == "csv" && cmd != "classify" && cmd != "flatness" && cmd != "extend") {
      throw ConfigError("--format csv is available for classify, flatness and extend");
    }
    if (cmd == "classify") result = run_classify(config);
    else if (cmd == "seminorm") result = run_seminorm(config);
    else if (cmd == "flatness") result = run_flatness(config);
    else if (cmd == "extend") result = run_extend(config);
    else if (cmd == "transport") result = run_transport(config);
    else if (cmd == "stereo") result = run_stereo(config);
    else if (cmd == "atlas check") result = run_atlas_check(config);
    else throw ConfigError("unknown subcommand '" + cmd + "'");
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  if (config.output.empty()) {
    out << result.text;
  } else {
    try {
      write_atomically(config.output, result.text);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kConfigError;
    }
  }
  return result.status;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  if (const char* env = std::getenv("RPNFLAT_SEED")) {
    try {
      c.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "error: RPNFLAT_SEED must be an unsigned integer\n";
      return kConfigError;
    }
  }

  CLI::App app{"Projective-space atlas, derivative transport and Schwartz/flatness analysis"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto add_function = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--function", c.function, "Field name (gaussian_nd, oscillator, ...)");
    if (required) opt->required();
    sub->add_option("--n", c.dim, "Dimension n of the affine chart R^n")->capture_default_str();
  };
  auto add_output = [&](CLI::App* sub, bool csv) {
    sub->add_option("--output,-o", c.output, "Report path (written atomically); stdout if omitted");
    if (csv) {
      sub->add_option("--format", c.format, "json | csv")->capture_default_str();
    }
  };
  auto add_thresholds = [&](CLI::App* sub) {
    sub->add_option("--growth-factor", c.thresholds.growth_factor)->capture_default_str();
    sub->add_option("--abs-floor", c.thresholds.abs_floor)->capture_default_str();
    sub->add_option("--decay-ceiling", c.thresholds.decay_ceiling)->capture_default_str();
    sub->add_option("--growth-exponent", c.thresholds.growth_exponent)->capture_default_str();
  };
  auto add_flatness = [&](CLI::App* sub) {
    sub->add_option("--i", c.source, "Chart carrying the field (1-based)")->capture_default_str();
    sub->add_option("--radius", c.radius)->capture_default_str();
    sub->add_option("--max-weight", c.max_weight, "Largest weight exponent p")->capture_default_str();
    sub->add_option("--order", c.order, "Largest derivative order |alpha|")->capture_default_str();
    sub->add_option("--levels", c.levels, "Dyadic refinement levels")->capture_default_str();
    sub->add_option("--samples", c.samples, "Random samples per level")->capture_default_str();
    sub->add_option("--seed", c.seed)->capture_default_str();
    sub->add_option("--workers", c.workers)->capture_default_str();
    sub->add_flag("--check", c.check, "Exit 1 unless the verdict matches the expected class");
    add_thresholds(sub);
  };

  auto* atlas = app.add_subcommand("atlas", "Projective atlas utilities");
  atlas->require_subcommand(1);
  auto* atlas_check = atlas->add_subcommand("check", "Run the atlas invariant suite");
  atlas_check->add_option("--dims", c.dims, "Dimensions to check")->delimiter(',')->capture_default_str();
  atlas_check->add_option("--samples", c.atlas_samples)->capture_default_str();
  atlas_check->add_option("--seed", c.seed)->capture_default_str();
  add_output(atlas_check, false);

  auto* classify = app.add_subcommand("classify", "Schwartz seminorm classification");
  add_function(classify, true);
  classify->add_option("--max-alpha", c.max_alpha)->capture_default_str();
  classify->add_option("--max-beta", c.max_beta)->capture_default_str();
  classify->add_option("--radii", c.radii, "Increasing annulus radii")->delimiter(',')->capture_default_str();
  classify->add_option("--points-per-axis", c.points_per_axis, "0 picks a default from n");
  classify->add_option("--workers", c.workers)->capture_default_str();
  classify->add_flag("--check", c.check, "Exit 1 unless the verdict matches the expected class");
  add_thresholds(classify);
  add_output(classify, true);

  auto* seminorm = app.add_subcommand("seminorm", "Grid estimate of sup |x^alpha d^beta f|");
  add_function(seminorm, true);
  seminorm->add_option("--alpha", c.alpha)->delimiter(',');
  seminorm->add_option("--beta", c.beta)->delimiter(',');
  seminorm->add_option("--range", c.range, "lo,hi on every axis")->delimiter(',')->capture_default_str();
  seminorm->add_option("--points-per-axis", c.points_per_axis, "Default 2001");
  seminorm->add_option("--annulus", c.annulus, "lo,hi restriction on |x|")->delimiter(',');
  seminorm->add_option("--workers", c.workers)->capture_default_str();
  add_output(seminorm, false);

  auto* flatness = app.add_subcommand("flatness", "Weighted-sup flatness check at one base point");
  add_function(flatness, true);
  add_flatness(flatness);
  flatness->add_option("--j", c.target, "Chart whose coordinates are sampled")->capture_default_str();
  flatness->add_option("--base-point", c.base_point, "Defaults to the origin")->delimiter(',');
  add_output(flatness, true);

  auto* extend = app.add_subcommand("extend", "Flatness against every other chart");
  add_function(extend, true);
  add_flatness(extend);
  extend->add_option("--base-points", c.base_points)->capture_default_str();
  extend->add_option("--spread", c.spread, "Range of generated base points")->capture_default_str();
  add_output(extend, true);

  auto* transport = app.add_subcommand("transport", "Transport matrix or derivative table");
  add_function(transport, false);
  transport->add_option("--i", c.source)->capture_default_str();
  transport->add_option("--j", c.target)->capture_default_str();
  transport->add_option("--point", c.point, "Point in chart j")->delimiter(',')->required();
  transport->add_option("--order", c.order)->capture_default_str();
  add_output(transport, false);

  auto* stereo_cmd = app.add_subcommand("stereo", "Stereographic projection and its inverse");
  stereo_cmd->add_option("--point", c.point, "Point of R^n, mapped to the sphere")->delimiter(',');
  stereo_cmd->add_option("--sphere-point", c.sphere_point, "(y, x1, ..., xn) on S^n")->delimiter(',');
  add_output(stereo_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    // Help requested on a subcommand surfaces here too.
    if (e.get_exit_code() == 0) {
      out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  if (atlas->parsed()) c.subcommand = "atlas check";
  else c.subcommand = app.get_subcommands().front()->get_name();
  return run(c, out, err);
}

}  // namespace rpnflat::cli
