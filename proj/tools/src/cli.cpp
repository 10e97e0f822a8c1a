#include "bilocal_cli/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "bilocal/criteria.hpp"
#include "bilocal/network.hpp"
#include "bilocal/scan.hpp"

namespace bilocal::cli {

namespace {

std::string num(double v) { return fmt::format("{:.12g}", v); }

std::vector<double> parse_list(const std::string& body, const std::string& text) {
  std::vector<double> values;
  std::stringstream in(body);
  for (std::string item; std::getline(in, item, ',');) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw InvalidParameters(fmt::format("'{}': '{}' is not a number", text, item));
    }
    values.push_back(v);
  }
  if (!body.empty() && body.back() == ',') {
    throw InvalidParameters(fmt::format("'{}': trailing comma", text));
  }
  return values;
}

void require_count(const std::vector<double>& v, std::size_t n, const std::string& text) {
  if (v.size() != n) {
    throw InvalidParameters(fmt::format("'{}': expected {} values, got {}", text, n, v.size()));
  }
}

void require_unit(double v, const std::string& text) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvalidParameters(fmt::format("'{}': parameter must lie in [0, 1]", text));
  }
}

const char* bilocal_verdict(Verdict v) {
  switch (v) {
    case Verdict::Above: return "nonbilocal";
    case Verdict::Boundary: return "boundary";
    case Verdict::Below: return "bilocal-satisfied";
  }
  return "?";
}

const char* chsh_verdict(Verdict v) {
  switch (v) {
    case Verdict::Above: return "nonlocal";
    case Verdict::Boundary: return "boundary";
    case Verdict::Below: return "local";
  }
  return "?";
}

void print_x(std::ostream& out, const std::string& prefix, const XParams& x) {
  fmt::print(out, "{}pop00: {}\n{}pop01: {}\n{}pop10: {}\n{}pop11: {}\n{}coh0011: {}\n{}coh0110: {}\n",
             prefix, num(x.pop00), prefix, num(x.pop01), prefix, num(x.pop10), prefix,
             num(x.pop11), prefix, num(x.coh0011), prefix, num(x.coh0110));
}

void print_settings(std::ostream& out, const MeasurementSettings& s) {
  const char* names[] = {"A0", "A1", "C0", "C1"};
  const BlochSetting* all[] = {&s.alice[0], &s.alice[1], &s.charlie[0], &s.charlie[1]};
  for (int k = 0; k < 4; ++k) {
    fmt::print(out, "setting {}: polar {} azimuth {}\n", names[k], num(all[k]->polar),
               num(all[k]->azimuth));
  }
}

int cmd_assess(const std::string& spec_text, std::ostream& out) {
  const StateSpec spec = parse_state_spec(spec_text);
  const XParams& x = spec.x;
  fmt::print(out, "state: {}\nvalid: true\n", spec.text);
  print_x(out, "", x);
  const auto h = horodecki(x_state_matrix(x));
  fmt::print(out, "horodecki_m: {}\nchsh_max: {}\nchsh: {}\n", num(h.m), num(h.chsh_max),
             chsh_verdict(h.nonlocal));
  fmt::print(out, "concurrence: {}\n", num(concurrence_x(x)));
  const auto v = locality_vars(x);
  fmt::print(out, "epsilon: {}\ndelta: {}\nxi: {}\n", num(v.epsilon), num(v.delta), num(v.xi));
  try {
    const auto s = steering_report(x);
    fmt::print(out, "steering_r: {} {} {}\n", num(s.r[0]), num(s.r[1]), num(s.r[2]));
    fmt::print(out, "steering_pre: {}\n", to_string(s.pre));
    fmt::print(out, "steering_r_swapped: {} {} {}\n", num(s.r_swapped[0]), num(s.r_swapped[1]),
               num(s.r_swapped[2]));
    fmt::print(out, "steering_w: {}\nsteering_post: {}\n", num(s.w), to_string(s.post));
    fmt::print(out, "steering_nonbilocal_value: {}\nsteering_nonbilocal: {}\n",
               num(s.nonbilocal_value), s.nonbilocal);
  } catch (const InvalidParameters& e) {
    fmt::print(out, "steering: unavailable ({})\n", e.what());
  }
  return kExitOk;
}

int cmd_bilocal(const std::string& a, const std::string& b, const std::string& mode, int workers,
                std::ostream& out) {
  const StateSpec s1 = parse_state_spec(a), s2 = parse_state_spec(b);
  const bool analytic = mode != "numeric";
  const bool numeric = mode != "analytic";
  fmt::print(out, "state1: {}\nstate2: {}\n", s1.text, s2.text);

  const AnalyticBound bound = analytic_bound_b1(s1.x, s2.x);
  Verdict verdict = compare_to_threshold(bound.value, 1.0);
  if (analytic) {
    fmt::print(out, "b1: {}\nb1_radicand: {}\n", num(bound.value), num(bound.radicand));
    if (bound.radicand_negative) fmt::print(out, "b1_radicand_negative: true\n");
  }
  if (numeric) {
    MaximizeOptions options;
    options.workers = workers;
    const auto best = maximize_b(s1.x, s2.x, options);
    fmt::print(out, "numeric_b: {}\nnumeric_i: {}\nnumeric_j: {}\n", num(best.b), num(best.i),
               num(best.j));
    print_settings(out, best.settings);
    if (best.null_branches > 0) fmt::print(out, "null_branches: {}\n", best.null_branches);
    if (analytic) fmt::print(out, "gap: {}\n", num(best.b - bound.value));
    verdict = best.verdict;
  }
  fmt::print(out, "verdict: {}\n", bilocal_verdict(verdict));
  return kExitOk;
}

int cmd_swap(const std::string& a, const std::string& b, std::ostream& out) {
  const StateSpec s1 = parse_state_spec(a), s2 = parse_state_spec(b);
  const auto outcomes = entanglement_swap(s1.x, s2.x);
  const auto& projectors = bell_projectors();
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const auto& o = outcomes[k];
    fmt::print(out, "branch {} ({}): probability {}\n", o.label.text(), projectors[k].name,
               num(o.probability));
    if (!o.conditional_state) {
      fmt::print(out, "  null branch\n");
      continue;
    }
    const auto& rho = *o.conditional_state;
    XParams c;
    c.pop00 = rho(0, 0).real();
    c.pop01 = rho(1, 1).real();
    c.pop10 = rho(2, 2).real();
    c.pop11 = rho(3, 3).real();
    c.coh0011 = rho(0, 3).real();
    c.coh0110 = rho(1, 2).real();
    print_x(out, "  ", c);
  }
  return kExitOk;
}

int cmd_filter(const std::string& a, double l1, double l2, std::ostream& out) {
  const StateSpec spec = parse_state_spec(a);
  const auto r = filtered_chsh_bound(spec.x, FilterParams{l1, l2});
  fmt::print(out, "state: {}\nl1: {}\nl2: {}\nnormalization: {}\n", spec.text, num(l1), num(l2),
             num(r.normalization));
  print_x(out, "filtered_", r.filtered);
  fmt::print(out, "chsh_bound: {}\n", num(r.chsh));
  fmt::print(out, "table_pq_positive: coherence {} zz {} value {}\n",
             num(r.positive_product.coherence_term), num(r.positive_product.zz_term),
             num(r.positive_product.value()));
  fmt::print(out, "table_pq_negative: coherence {} zz {} value {}\n",
             num(r.negative_product.coherence_term), num(r.negative_product.zz_term),
             num(r.negative_product.value()));
  fmt::print(out, "table_selected: {}\n", num(r.selected().value()));
  return kExitOk;
}

struct ScanArgs {
  std::optional<int> figure;
  std::string config_path;
  double step = 0.01;
  std::string format = "csv";
  std::string out_path;
  int workers = 1;
  std::string flagged_only;
};

int cmd_scan(const ScanArgs& args, std::ostream& out) {
  ScanConfig cfg;
  std::string stem;
  if (args.figure) {
    cfg = ScanConfig::figure(*args.figure, args.step);
    stem = fmt::format("fig{}", *args.figure);
  } else {
    std::ifstream in(args.config_path);
    if (!in) throw InvalidParameters(fmt::format("cannot read config '{}'", args.config_path));
    cfg = parse_scan_config(in);
    stem = std::filesystem::path(args.config_path).stem().string();
  }
  if (args.workers != 1) cfg.workers = args.workers;
  if (!args.flagged_only.empty()) cfg.flagged_only = args.flagged_only;
  const OutputFormat format = parse_output_format(args.format);
  const ScanLayout layout = scan_layout(cfg);

  std::filesystem::path destination = args.out_path;
  const char* dir = std::getenv(kOutputDirEnv);
  if (dir && *dir) {
    if (destination.empty()) destination = fmt::format("{}.{}", stem, args.format);
    if (destination.is_relative()) destination = std::filesystem::path(dir) / destination;
  }

  auto stream_records = [&](std::ostream& sink) {
    RecordWriter writer(sink, format, layout);
    for_each_scan_record(cfg, [&](const ScanRecord& r) { writer.write(r); });
    writer.finish();
    return writer.count();
  };

  if (destination.empty()) {
    stream_records(out);
    return kExitOk;
  }
  std::ofstream file(destination, std::ios::binary | std::ios::trunc);
  if (!file) throw ScanIoError(fmt::format("cannot write '{}'", destination.string()));
  const std::size_t count = stream_records(file);
  file.close();
  if (!file) throw ScanIoError(fmt::format("write to '{}' failed", destination.string()));
  fmt::print(out, "wrote {} records to {}\n", count, destination.string());
  return kExitOk;
}

int cmd_models(std::ostream& out) {
  for (const auto& m : scan_models()) {
    fmt::print(out, "{}: {}\n  variables: {}\n  columns:", m.name, m.description,
               fmt::join(m.variables, " "));
    for (const auto& c : m.columns) fmt::print(out, " {}", c.name);
    fmt::print(out, "\n");
  }
  return kExitOk;
}

}  // namespace

StateSpec parse_state_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw InvalidParameters(
        fmt::format("'{}': expected family:values (x, t, werner, alpha, hidden)", text));
  }
  const std::string family = text.substr(0, colon);
  const auto values = parse_list(text.substr(colon + 1), text);
  StateSpec spec;
  spec.text = text;
  if (family == "x") {
    require_count(values, 6, text);
    spec.x = XParams{values[0], values[1], values[2], values[3], values[4], values[5]};
    validate(spec.x);
  } else if (family == "t") {
    require_count(values, 3, text);
    spec.t = TParams{values[0], values[1], values[2]};
    spec.x = t_to_x(*spec.t);
  } else if (family == "werner") {
    require_count(values, 1, text);
    require_unit(values[0], text);
    spec.t = werner(values[0]);
    spec.x = t_to_x(*spec.t);
  } else if (family == "alpha") {
    require_count(values, 1, text);
    require_unit(values[0], text);
    spec.t = alpha_state_t(values[0]);
    spec.x = alpha_state(values[0]);
  } else if (family == "hidden") {
    require_count(values, 1, text);
    require_unit(values[0], text);
    spec.x = hidden_nonlocality_state(values[0]);
  } else {
    throw InvalidParameters(fmt::format("'{}': unknown state family '{}'", text, family));
  }
  return spec;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nonbilocality analysis for two-source entanglement-swapping networks"};
  app.name("bilocal");
  app.require_subcommand(1, 1);

  std::string state1, state2;
  auto* assess = app.add_subcommand("assess", "Single-state report");
  assess->add_option("state", state1, "State spec, e.g. t:-1,-1,-1")->required();

  std::string mode = "both";
  int workers = 1;
  auto* bilocal = app.add_subcommand("bilocal", "Bilocal inequality for a pair of sources");
  bilocal->add_option("state1", state1)->required();
  bilocal->add_option("state2", state2)->required();
  bilocal->add_option("--mode", mode, "analytic, numeric or both")
      ->check(CLI::IsMember({"analytic", "numeric", "both"}));
  bilocal->add_option("--workers", workers, "Threads for the numeric search")
      ->check(CLI::PositiveNumber);

  auto* swap = app.add_subcommand("swap", "Bell-measurement branches at the middle party");
  swap->add_option("state1", state1)->required();
  swap->add_option("state2", state2)->required();

  double l1 = 1.0, l2 = 1.0;
  auto* filter = app.add_subcommand("filter", "Local filtering and CHSH bound");
  filter->add_option("state", state1)->required();
  filter->add_option("--l1", l1, "First-side filter strength in (0, 1]")->required();
  filter->add_option("--l2", l2, "Second-side filter strength in (0, 1]")->required();

  ScanArgs scan_args;
  int figure = 0;
  auto* scan = app.add_subcommand("scan", "Grid scan written as CSV or JSON");
  auto* fig_opt = scan->add_option("--fig", figure, "Built-in figure scan")->check(CLI::Range(2, 6));
  auto* cfg_opt = scan->add_option("--config", scan_args.config_path, "Key-value scan config");
  fig_opt->excludes(cfg_opt);
  scan->add_option("--step", scan_args.step, "Grid step for --fig")->check(CLI::PositiveNumber);
  scan->add_option("--format", scan_args.format)->check(CLI::IsMember({"csv", "json"}));
  scan->add_option("--out", scan_args.out_path, "Destination file (default: stdout)");
  scan->add_option("--workers", scan_args.workers)->check(CLI::PositiveNumber);
  scan->add_option("--flagged-only", scan_args.flagged_only, "Keep records with this flag set");

  auto* models = app.add_subcommand("models", "List scan models");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (scan->parsed() && fig_opt->count() == 0 && cfg_opt->count() == 0) {
      throw CLI::RequiredError("scan needs --fig or --config");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (assess->parsed()) return cmd_assess(state1, out);
    if (bilocal->parsed()) return cmd_bilocal(state1, state2, mode, workers, out);
    if (swap->parsed()) return cmd_swap(state1, state2, out);
    if (filter->parsed()) return cmd_filter(state1, l1, l2, out);
    if (scan->parsed()) {
      if (fig_opt->count() > 0) scan_args.figure = figure;
      return cmd_scan(scan_args, out);
    }
    if (models->parsed()) return cmd_models(out);
  } catch (const ScanIoError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitIoError;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace bilocal::cli
