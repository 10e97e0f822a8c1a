#include "bilocal/scan.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "bilocal/criteria.hpp"
#include "bilocal/network.hpp"
#include "bilocal/states.hpp"

namespace bilocal {

namespace {

constexpr double kUnbound = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kChunk = 2048;

struct Variable {
  std::string name;
  double default_value = kUnbound;
  bool required = true;
};

using Columns = std::vector<double>;

/// Returns the model columns, or nullopt for a physically invalid point.
/// May also throw InvalidParameters for invalid points.
using Evaluator = std::optional<std::vector<double>> (*)(const std::vector<double>& vars);

struct Model {
  std::string name;
  std::string description;
  std::vector<Variable> variables;
  std::vector<ColumnSpec> columns;
  bool can_be_invalid = false;
  Evaluator evaluate = nullptr;
};

ColumnSpec real(std::string name) { return {std::move(name), ColumnKind::Real}; }
ColumnSpec flag(std::string name) { return {std::move(name), ColumnKind::Flag}; }
double as_flag(bool b) { return b ? 1.0 : 0.0; }

/// Admissible cy closest to zero for a T state with the given cx, cz, or NaN
/// when no admissible value exists.
double nearest_admissible_cy(double cx, double cz) {
  const double lo = std::max({-1.0, cz - 1.0 - cx, cx - 1.0 - cz});
  const double hi = std::min({1.0, 1.0 - cz - cx, cx + 1.0 + cz});
  if (lo > hi + 1e-12) return kUnbound;
  return std::clamp(0.0, lo, std::max(lo, hi));
}

std::optional<std::vector<double>> eval_t_same_copies(const std::vector<double>& v) {
  double cy = v[1];
  if (std::isnan(cy)) {
    cy = nearest_admissible_cy(v[0], v[2]);
    if (std::isnan(cy)) throw InvalidParameters("no admissible cy");
  }
  const TParams t{v[0], cy, v[2]};
  const auto local = t_local_condition(t, t);
  const auto nonbilocal = t_nonbilocal_condition(t, t);
  return Columns{cy,
          local.value,
          as_flag(local.holds),
          nonbilocal.value,
          as_flag(nonbilocal.holds),
          as_flag(local.holds && nonbilocal.holds)};
}

std::optional<std::vector<double>> eval_visibility(const std::vector<double>& v) {
  const auto r = visibility_analysis(v[0], v[1]);
  return Columns{r.tradeoff, as_flag(r.nonbilocal)};
}

std::optional<std::vector<double>> eval_x_steering(const std::vector<double>& v) {
  XParams x;
  x.pop00 = v[0];
  x.pop01 = v[1];
  x.pop10 = v[2];
  x.pop11 = 1.0 - v[0] - v[1] - v[2];
  x.coh0011 = v[3];
  x.coh0110 = v[4];
  // Cheap rejection of the many grid points outside the positivity region.
  if (x.pop11 < -1e-12 || x.coh0011 * x.coh0011 > x.pop00 * x.pop11 + 1e-12) return std::nullopt;
  const auto r = steering_report(x);
  const bool pre = r.pre == SteeringVerdict::Guaranteed;
  const bool post = r.post == SteeringVerdict::Guaranteed;
  return Columns{r.r[0],         r.r[1],           r.r[2],           r.r_swapped[0],
          r.r_swapped[1], r.r_swapped[2],   r.w,              as_flag(pre),
          as_flag(post),  r.nonbilocal_value, as_flag(r.nonbilocal),
          as_flag(!pre && !post && r.nonbilocal)};
}

std::optional<std::vector<double>> eval_alpha_pair(const std::vector<double>& v) {
  const auto r = alpha_nonbilocal(v[0], v[1]);
  return Columns{r.value, as_flag(r.holds)};
}

std::optional<std::vector<double>> eval_delta_plane(const std::vector<double>& v) {
  const auto r = maximal_plane_condition(v[0], v[1]);
  return Columns{r.product, as_flag(r.verdict == Verdict::Above)};
}

std::vector<double> werner_columns(double a1, double a2) {
  if (a1 < 0.0 || a1 > 1.0 || a2 < 0.0 || a2 > 1.0) {
    throw InvalidParameters("Werner visibility outside [0, 1]");
  }
  const TParams t1 = werner(a1), t2 = werner(a2);
  const auto nonbilocal = t_nonbilocal_condition(t1, t2);
  const auto local = t_local_condition(t1, t2);
  return Columns{nonbilocal.value, as_flag(nonbilocal.holds), local.value, as_flag(local.holds)};
}

std::optional<std::vector<double>> eval_werner_same(const std::vector<double>& v) {
  return werner_columns(v[0], v[0]);
}

std::optional<std::vector<double>> eval_werner_pair(const std::vector<double>& v) {
  return werner_columns(v[0], v[1]);
}

std::optional<std::vector<double>> eval_t_pair(const std::vector<double>& v) {
  const TParams t1{v[0], v[1], v[2]}, t2{v[3], v[4], v[5]};
  const auto local = t_local_condition(t1, t2);
  const auto nonbilocal = t_nonbilocal_condition(t1, t2);
  return Columns{local.value,       as_flag(local.holds), nonbilocal.value, as_flag(nonbilocal.holds),
          concurrence_t(t1), concurrence_t(t2)};
}

XParams x_from(const std::vector<double>& v, std::size_t offset) {
  XParams x;
  x.pop00 = v[offset];
  x.pop01 = v[offset + 1];
  x.pop10 = v[offset + 2];
  x.pop11 = 1.0 - v[offset] - v[offset + 1] - v[offset + 2];
  x.coh0011 = v[offset + 3];
  x.coh0110 = v[offset + 4];
  validate(x);
  return x;
}

std::optional<std::vector<double>> eval_x_pair(const std::vector<double>& v) {
  const auto bound = analytic_bound_b1(x_from(v, 0), x_from(v, 5));
  return Columns{bound.value, bound.radicand, as_flag(bound.radicand_negative),
          as_flag(compare_to_threshold(bound.value, 1.0) == Verdict::Above)};
}

std::vector<Variable> x_variables(const std::string& prefix) {
  return {{prefix + "pop00"},
          {prefix + "pop01"},
          {prefix + "pop10"},
          {prefix + "coh0011", 0.0, false},
          {prefix + "coh0110", 0.0, false}};
}

const std::vector<Model>& models() {
  static const std::vector<Model> all = [] {
    std::vector<Model> m;
    m.push_back({"t_same_copies",
                 "two identical T copies; cy defaults to the admissible value nearest zero",
                 {{"cx"}, {"cy", kUnbound, false}, {"cz"}},
                 {real("cy"), real("r6_value"), flag("local"), real("r7_value"), flag("nonbilocal"),
                  flag("local_but_nonbilocal")},
                 true,
                 eval_t_same_copies});
    m.push_back({"visibility_tradeoff",
                 "Werner pair at visibilities 1/sqrt2 - phi1 and 1/sqrt2 + phi2",
                 {{"phi1"}, {"phi2"}},
                 {real("tradeoff"), flag("nonbilocal")},
                 false,
                 eval_visibility});
    auto steering_vars = x_variables("");
    m.push_back({"x_steering",
                 "identical X copies, pop11 fixed by normalization; steering versus nonbilocality",
                 steering_vars,
                 {real("r1"), real("r2"), real("r3"), real("r1_swapped"), real("r2_swapped"),
                  real("r3_swapped"), real("w"), flag("pre_steerable"), flag("post_steerable"),
                  real("st12_value"), flag("nonbilocal"), flag("witness")},
                 true,
                 eval_x_steering});
    m.push_back({"alpha_pair",
                 "two alpha-state copies",
                 {{"alpha1"}, {"alpha2"}},
                 {real("s1_value"), flag("nonbilocal")},
                 false,
                 eval_alpha_pair});
    m.push_back({"delta_plane",
                 "maximal plane epsilon = xi in the locality variables",
                 {{"delta1"}, {"delta2"}},
                 {real("product"), flag("nonbilocal_capable")},
                 false,
                 eval_delta_plane});
    m.push_back({"werner_same_copies",
                 "two Werner copies at the same visibility",
                 {{"alpha"}},
                 {real("b1"), flag("nonbilocal"), real("r6_value"), flag("local")},
                 false,
                 eval_werner_same});
    m.push_back({"werner_pair",
                 "two Werner copies",
                 {{"alpha1"}, {"alpha2"}},
                 {real("b1"), flag("nonbilocal"), real("r6_value"), flag("local")},
                 false,
                 eval_werner_pair});
    m.push_back({"t_pair",
                 "two arbitrary T copies",
                 {{"t1_cx"}, {"t1_cy"}, {"t1_cz"}, {"t2_cx"}, {"t2_cy"}, {"t2_cz"}},
                 {real("r6_value"), flag("local"), real("r7_value"), flag("nonbilocal"),
                  real("concurrence1"), real("concurrence2")},
                 true,
                 eval_t_pair});
    auto pair_vars = x_variables("x1_");
    for (auto& var : x_variables("x2_")) pair_vars.push_back(var);
    m.push_back({"x_pair",
                 "two arbitrary X copies, pop11 fixed by normalization",
                 pair_vars,
                 {real("b1"), real("radicand"), flag("radicand_negative"), flag("nonbilocal")},
                 true,
                 eval_x_pair});
    return m;
  }();
  return all;
}

const Model& find_model(const std::string& name) {
  for (const auto& m : models()) {
    if (m.name == name) return m;
  }
  throw ScanConfigError(fmt::format("unknown scan model '{}'", name));
}

/// Config resolved against its model: where each model variable comes from.
struct Plan {
  const Model* model = nullptr;
  ScanLayout layout;
  std::vector<std::vector<double>> axis_values;
  std::vector<int> variable_axis;       // axis index or -1
  std::vector<double> variable_value;   // used when variable_axis == -1
  std::vector<std::size_t> column_map;  // layout column -> model column
  std::optional<std::size_t> filter_column;
  std::size_t size = 0;
  int workers = 1;
};

Plan make_plan(const ScanConfig& cfg) {
  Plan plan;
  plan.model = &find_model(cfg.model);
  const Model& model = *plan.model;

  if (cfg.axes.empty() || cfg.axes.size() > 3) {
    throw ScanConfigError(fmt::format("a scan needs 1 to 3 axes, got {}", cfg.axes.size()));
  }
  if (cfg.workers < 1) throw ScanConfigError("workers must be at least 1");
  plan.workers = cfg.workers;

  auto variable_index = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < model.variables.size(); ++i) {
      if (model.variables[i].name == name) return i;
    }
    throw ScanConfigError(fmt::format("model '{}' has no variable '{}'", model.name, name));
  };

  plan.variable_axis.assign(model.variables.size(), -1);
  plan.variable_value.resize(model.variables.size());
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    plan.variable_value[i] = model.variables[i].default_value;
  }
  std::vector<bool> bound(model.variables.size(), false);

  plan.size = 1;
  for (std::size_t a = 0; a < cfg.axes.size(); ++a) {
    const ScanAxis& axis = cfg.axes[a];
    const std::size_t vi = variable_index(axis.name);
    if (bound[vi]) throw ScanConfigError(fmt::format("variable '{}' bound twice", axis.name));
    bound[vi] = true;
    plan.variable_axis[vi] = static_cast<int>(a);
    plan.axis_values.push_back(axis.values());
    plan.layout.axis_names.push_back(axis.name);
    plan.size *= plan.axis_values.back().size();
  }
  for (const auto& [name, value] : cfg.fixed) {
    const std::size_t vi = variable_index(name);
    if (bound[vi]) throw ScanConfigError(fmt::format("variable '{}' bound twice", name));
    if (!std::isfinite(value)) throw ScanConfigError(fmt::format("'{}' must be finite", name));
    bound[vi] = true;
    plan.variable_value[vi] = value;
  }
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    if (!bound[i] && model.variables[i].required) {
      throw ScanConfigError(
          fmt::format("model '{}' needs a value for '{}'", model.name, model.variables[i].name));
    }
  }

  auto column_index = [&](const std::string& name) -> std::size_t {
    for (std::size_t c = 0; c < model.columns.size(); ++c) {
      if (model.columns[c].name == name) return c;
    }
    throw ScanConfigError(fmt::format("model '{}' has no criterion '{}'", model.name, name));
  };
  if (cfg.criteria.empty()) {
    for (std::size_t c = 0; c < model.columns.size(); ++c) plan.column_map.push_back(c);
  } else {
    std::set<std::string> seen;
    for (const auto& name : cfg.criteria) {
      if (!seen.insert(name).second) {
        throw ScanConfigError(fmt::format("criterion '{}' listed twice", name));
      }
      plan.column_map.push_back(column_index(name));
    }
  }
  for (std::size_t c : plan.column_map) plan.layout.columns.push_back(model.columns[c]);
  plan.layout.has_valid_column = model.can_be_invalid;

  if (cfg.flagged_only) {
    const std::size_t c = column_index(*cfg.flagged_only);
    if (model.columns[c].kind != ColumnKind::Flag) {
      throw ScanConfigError(fmt::format("'{}' is not a flag column", *cfg.flagged_only));
    }
    plan.filter_column = c;
  }
  return plan;
}

struct Evaluated {
  ScanRecord record;
  bool keep = true;
};

Evaluated evaluate_point(const Plan& plan, std::size_t index) {
  Evaluated out;
  const std::size_t axes = plan.axis_values.size();
  out.record.axes.resize(axes);
  std::size_t rest = index;
  for (std::size_t a = axes; a-- > 0;) {
    const auto& values = plan.axis_values[a];
    out.record.axes[a] = values[rest % values.size()];
    rest /= values.size();
  }
  std::vector<double> vars = plan.variable_value;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (plan.variable_axis[i] >= 0) vars[i] = out.record.axes[plan.variable_axis[i]];
  }

  std::optional<std::vector<double>> evaluated;
  std::string reason = "invalid parameters";
  try {
    evaluated = plan.model->evaluate(vars);
  } catch (const InvalidParameters& e) {
    reason = e.what();
  }
  if (!evaluated) {
    if (!plan.model->can_be_invalid) {
      throw ScanConfigError(fmt::format("grid point outside the domain of model '{}': {}",
                                        plan.model->name, reason));
    }
    out.record.valid = false;
    out.keep = !plan.filter_column.has_value();
    return out;
  }
  const std::vector<double>& columns = *evaluated;
  out.record.values.reserve(plan.column_map.size());
  for (std::size_t c : plan.column_map) out.record.values.push_back(columns[c]);
  if (plan.filter_column) out.keep = columns[*plan.filter_column] != 0.0;
  return out;
}

}  // namespace

std::vector<double> ScanAxis::values() const {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw ScanConfigError(fmt::format("axis '{}': step must be positive", name));
  }
  if (!std::isfinite(min) || !std::isfinite(max) || min > max) {
    throw ScanConfigError(fmt::format("axis '{}': need finite min <= max", name));
  }
  const double steps = std::floor((max - min) / step + 1e-9);
  if (steps > 1e8) throw ScanConfigError(fmt::format("axis '{}': too many grid points", name));
  const auto n = static_cast<std::size_t>(steps);
  std::vector<double> out;
  out.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) out.push_back(std::min(max, min + static_cast<double>(i) * step));
  if (max - out.back() > 1e-9 * step) out.push_back(max);
  return out;
}

ScanConfig ScanConfig::figure(int figure_id, double step) {
  ScanConfig cfg;
  switch (figure_id) {
    case 2:
      cfg.model = "t_same_copies";
      cfg.axes = {{"cx", -1.0, 1.0, step}, {"cz", -1.0, 1.0, step}};
      break;
    case 3:
      cfg.model = "visibility_tradeoff";
      cfg.axes = {{"phi1", 0.0, kLocalVisibilityThreshold, step},
                  {"phi2", 0.0, 1.0 - kLocalVisibilityThreshold, step}};
      break;
    case 4:
      // Positivity with coh0011 = 0.24 forces pop01 + pop10 <= 1 - 2 * 0.24.
      cfg.model = "x_steering";
      cfg.axes = {{"pop00", 0.0, 1.0, step}, {"pop01", 0.0, 0.52, step}, {"pop10", 0.0, 0.52, step}};
      cfg.fixed = {{"coh0011", 0.24}, {"coh0110", 0.0}};
      break;
    case 5:
      cfg.model = "alpha_pair";
      cfg.axes = {{"alpha1", 0.0, 1.0, step}, {"alpha2", 0.0, 1.0, step}};
      break;
    case 6:
      cfg.model = "delta_plane";
      cfg.axes = {{"delta1", -1.0, 1.0, step}, {"delta2", -1.0, 1.0, step}};
      break;
    default:
      throw ScanConfigError(fmt::format("no built-in scan for figure {}", figure_id));
  }
  return cfg;
}

double ScanRecord::value(const ScanLayout& layout, const std::string& column) const {
  for (std::size_t c = 0; c < layout.columns.size(); ++c) {
    if (layout.columns[c].name == column) {
      if (!valid) return std::numeric_limits<double>::quiet_NaN();
      return values.at(c);
    }
  }
  for (std::size_t a = 0; a < layout.axis_names.size(); ++a) {
    if (layout.axis_names[a] == column) return axes.at(a);
  }
  throw std::out_of_range(fmt::format("no column '{}'", column));
}

bool ScanRecord::flag(const ScanLayout& layout, const std::string& column) const {
  if (column == "valid") return valid;
  if (!valid) return false;
  return value(layout, column) != 0.0;
}

std::vector<ScanModelInfo> scan_models() {
  std::vector<ScanModelInfo> out;
  for (const auto& m : models()) {
    ScanModelInfo info{m.name, m.description, {}, m.columns, m.can_be_invalid};
    for (const auto& v : m.variables) info.variables.push_back(v.name);
    out.push_back(std::move(info));
  }
  return out;
}

ScanLayout scan_layout(const ScanConfig& cfg) { return make_plan(cfg).layout; }

std::size_t scan_size(const ScanConfig& cfg) { return make_plan(cfg).size; }

void for_each_scan_record(const ScanConfig& cfg,
                          const std::function<void(const ScanRecord&)>& sink) {
  const Plan plan = make_plan(cfg);
  const std::size_t workers = static_cast<std::size_t>(plan.workers);

  if (workers == 1) {
    for (std::size_t i = 0; i < plan.size; ++i) {
      auto e = evaluate_point(plan, i);
      if (e.keep) sink(e.record);
    }
    return;
  }

  // Batches of `workers` chunks evaluated concurrently, delivered in grid order.
  std::vector<std::vector<Evaluated>> chunks(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t begin = 0; begin < plan.size; begin += kChunk * workers) {
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = std::min(plan.size, begin + w * kChunk);
        const std::size_t hi = std::min(plan.size, lo + kChunk);
        pool.emplace_back([&, w, lo, hi] {
          try {
            chunks[w].clear();
            for (std::size_t i = lo; i < hi; ++i) chunks[w].push_back(evaluate_point(plan, i));
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (std::size_t w = 0; w < workers; ++w) {
      if (errors[w]) std::rethrow_exception(errors[w]);
      for (const auto& e : chunks[w]) {
        if (e.keep) sink(e.record);
      }
    }
  }
}

ScanTable run_scan(const ScanConfig& cfg) {
  ScanTable table;
  table.layout = scan_layout(cfg);
  for_each_scan_record(cfg, [&](const ScanRecord& r) { table.records.push_back(r); });
  return table;
}

}  // namespace bilocal
