#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hyperfold/audits.hpp"
#include "hyperfold/bessel.hpp"
#include "hyperfold/composite.hpp"
#include "hyperfold/harness/config.hpp"
#include "hyperfold/numeric/parallel.hpp"
#include "hyperfold/oscillatory.hpp"
#include "hyperfold/phase.hpp"
#include "hyperfold/wave_kernel.hpp"

namespace hyperfold::harness {

enum ExitCode : int { kSuccess = 0, kInvalidConfig = 1, kAuditFailure = 2 };

struct AuditOutcome {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string details;
};

inline AuditOutcome at_most(std::string name, double measured, double threshold, std::string details = {}) {
  return {std::move(name), measured <= threshold, measured, threshold, std::move(details)};
}

struct RunResult {
  int exit_code = kSuccess;
  std::vector<AuditOutcome> audits;
  std::vector<std::string> files;  ///< written, relative to the output directory
};

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"phase", "bounds", "kernel", "decay", "bessel", "composite"};
  return names;
}

/// %.17g with a sign-free spelling of NaN.
inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : width_(header.size()) { row(header); }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::logic_error("CsvWriter: wrong row width");
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) text_ += ',';
      text_ += cells[k];
    }
    text_ += '\n';
  }
  void append(const std::string& block) { text_ += block; }
  const std::string& text() const { return text_; }

 private:
  std::size_t width_;
  std::string text_;
};

inline void write_file(const std::filesystem::path& dir, const std::string& name, const std::string& text,
                       RunResult& result) {
  std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  out << text;
  result.files.push_back(name);
}

inline json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline phase::PhaseParams params(const ScenarioConfig& c) {
  return phase::PhaseParams::make(c.geometry.a, c.geometry.r, c.geometry.beta, c.geometry.s_interval_offset);
}

inline double grid_point(double lo, double hi, std::size_t i, std::size_t n) {
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

inline void run_phase(const ScenarioConfig& c, const std::filesystem::path& dir, RunResult& res) {
  const auto p = params(c);
  const auto z = phase::zero_geometry(p);
  const auto n = static_cast<std::size_t>(c.grid_n);
  std::vector<std::string> rows(n);
  std::vector<std::array<std::size_t, 4>> counts(n);
  numeric::parallel_for(n, [&](std::size_t i) {
    const double t = grid_point(0.0, 1.0, i, n);
    std::string block;
    for (std::size_t j = 0; j < n; ++j) {
      const double s = grid_point(p.s_lo, p.s_hi(), j, n);
      const auto label = phase::classify_region(t, s, z, c.epsilon);
      ++counts[i][static_cast<std::size_t>(label)];
      block += fmt(t) + ',' + fmt(s) + ',' + fmt(phase::phi(t, s, p)) + ',' + fmt(phase::phi_st(t, s, p)) + ',' +
               phase::to_string(label) + '\n';
    }
    rows[i] = std::move(block);
  });
  CsvWriter csv({"t", "s", "phi", "phi_st", "region"});
  for (const auto& r : rows) csv.append(r);
  write_file(dir, "phase_surface.csv", csv.text(), res);

  json j;
  j["empty"] = z.empty;
  j["X0"] = number_or_null(z.X0);
  j["Y0"] = number_or_null(z.Y0);
  j["B"] = number_or_null(z.B);
  j["t_plus"] = number_or_null(z.t_plus);
  j["t_minus"] = number_or_null(z.t_minus);
  j["s_plus"] = number_or_null(z.s_plus);
  j["s_minus"] = number_or_null(z.s_minus);
  j["asymptotes"] = json::array();
  for (double a : z.asymptotes) j["asymptotes"].push_back(number_or_null(a));
  j["epsilon0"] = z.empty ? json(nullptr) : number_or_null(phase::epsilon0(z, c.epsilon));
  json region_counts = json::object();
  for (auto label : osc::kRegionOrder) {
    std::size_t total = 0;
    for (const auto& row : counts) total += row[static_cast<std::size_t>(label)];
    region_counts[phase::to_string(label)] = total;
  }
  j["region_counts"] = region_counts;
  write_file(dir, "zero_geometry.json", j.dump(2) + "\n", res);
}

inline void run_bounds(const ScenarioConfig& c, const std::filesystem::path& dir, RunResult& res) {
  const auto p = params(c);
  const geometry::Tube tube(c.tube_R);
  const auto n = static_cast<std::size_t>(c.grid_n);
  constexpr double kMaxC = 25.0;

  CsvWriter l1({"eps", "region", "present", "count", "minimum", "t", "s", "implied_C"});
  std::vector<phase::Lemma1Audit> audits;
  for (double eps : {c.epsilon, 0.5 * c.epsilon}) {
    audits.push_back(phase::lemma1_audit(p, c.T, eps, n, tube));
    const auto& a = audits.back();
    const std::pair<const char*, const phase::RegionMinimum*> regions[] = {
        {"NonStationary", &a.nonstationary}, {"LeftFold", &a.left_fold}, {"RightFold", &a.right_fold}};
    for (const auto& [name, m] : regions)
      l1.row({fmt(eps), name, m->present ? "1" : "0", std::to_string(m->count), fmt(m->minimum), fmt(m->t), fmt(m->s),
              fmt(m->implied_C)});
  }
  write_file(dir, "lemma1_audit.csv", l1.text(), res);

  for (std::size_t k = 0; k < audits.size(); ++k) {
    const auto& a = audits[k];
    const std::string tag = k == 0 ? "" : " (eps/2)";
    res.audits.push_back({"lemma1 minima positive" + tag, a.all_positive(), a.all_positive() ? 1.0 : 0.0, 1.0, ""});
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto* m : {&a.nonstationary, &a.left_fold, &a.right_fold})
      if (m->present) worst = std::max(worst, m->implied_C);
    res.audits.push_back(at_most("lemma1 implied C" + tag, worst, kMaxC));
  }
  // Halving eps enlarges the non-stationary region, so its infimum cannot grow.
  const auto& ns0 = audits[0].nonstationary;
  const auto& ns1 = audits[1].nonstationary;
  const bool monotone = !ns0.present || (ns1.present && ns1.minimum <= ns0.minimum && ns1.count >= ns0.count);
  res.audits.push_back({"lemma1 monotone under eps halving", monotone, monotone ? 1.0 : 0.0, 1.0, ""});

  const auto l2 = phase::lemma2_audit(p, c.T, 4, n, tube, c.fd_step);
  CsvWriter csv2({"order_t", "order_s", "sup", "implied_C"});
  for (const auto& e : l2.entries)
    csv2.row({std::to_string(e.order_t), std::to_string(e.order_s), fmt(e.sup), fmt(e.implied_C)});
  write_file(dir, "lemma2_audit.csv", csv2.text(), res);
  res.audits.push_back({"lemma2 implied C finite", l2.all_finite(), l2.all_finite() ? 1.0 : 0.0, 1.0, ""});
  res.audits.push_back(at_most("lemma2 mixed sup agreement", l2.mixed_agreement(), 1e-6));
}

inline void run_kernel(const ScenarioConfig& c, const std::filesystem::path& dir, RunResult& res) {
  const auto cut = wave::make_cutoffs();
  std::vector<std::pair<double, double>> points;  // (r, lambda)
  for (int r = 1; r <= static_cast<int>(std::floor(c.T)); ++r)
    for (double lambda : c.lambda_grid) points.emplace_back(r, lambda);
  std::vector<wave::KernelEvaluation> evals(points.size());
  numeric::parallel_for(points.size(), [&](std::size_t k) {
    evals[k] = wave::kernel_at_distance(points[k].first, points[k].second, c.T, cut);
  });
  CsvWriter csv({"r", "lambda", "T", "re", "im", "bound_ratio"});
  std::vector<double> ratios;
  for (std::size_t k = 0; k < evals.size(); ++k) {
    const auto& e = evals[k];
    ratios.push_back(e.bound_ratio());
    csv.row({fmt(points[k].first), fmt(points[k].second), fmt(c.T), fmt(e.total.real()), fmt(e.total.imag()),
             fmt(e.bound_ratio())});
  }
  write_file(dir, "kalpha.csv", csv.text(), res);
  if (ratios.empty()) return;
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front(), hi = sorted.back();
  const double median = sorted[sorted.size() / 2];
  const double spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  res.audits.push_back(at_most("kernel bound_ratio spread", spread, 8.0));
  res.audits.push_back(at_most("kernel bound_ratio over median", median > 0.0 ? hi / median : spread, 10.0));
}

inline osc::Phase decay_phase(const ScenarioConfig& c) {
  if (c.decay_phase == "nondegenerate") return osc::nondegenerate_phase();
  if (c.decay_phase == "fold") return osc::fold_phase();
  if (c.decay_phase == "separable") return osc::separable_phase();
  return osc::hyperbolic_phase(params(c));
}

inline void run_decay(const ScenarioConfig& c, const std::filesystem::path& dir, RunResult& res) {
  const auto phase = decay_phase(c);
  const osc::Rect box = c.decay_phase == "hyperbolic"
                            ? osc::Rect{0.0, 1.0, c.geometry.s_interval_offset, c.geometry.s_interval_offset + 1.0}
                            : osc::Rect{};
  osc::NormOptions opt;
  opt.lanczos.seed = c.seed;
  const auto fit = osc::decay_fit(phase, osc::bump_amplitude(box), c.lambda_grid, opt);
  CsvWriter csv({"lambda", "opnorm"});
  for (std::size_t k = 0; k < fit.norms.size(); ++k) csv.row({fmt(fit.lambda_grid[k]), fmt(fit.norms[k])});
  write_file(dir, "decay.csv", csv.text(), res);
  json j;
  j["sigma"] = fit.sigma;
  j["r_squared"] = fit.r_squared;
  write_file(dir, "fit.json", j.dump(2) + "\n", res);

  const std::map<std::string, std::pair<double, double>> bands{
      {"nondegenerate", {0.45, 0.55}}, {"fold", {0.20, 0.30}}, {"separable", {-0.05, 0.05}}};
  if (auto it = bands.find(c.decay_phase); it != bands.end()) {
    const auto [lo, hi] = it->second;
    const double centre = 0.5 * (lo + hi);
    res.audits.push_back(at_most("decay sigma in [" + fmt(lo) + ", " + fmt(hi) + "]", std::fabs(fit.sigma - centre),
                                 0.5 * (hi - lo), "sigma = " + fmt(fit.sigma)));
  }
}

inline void run_bessel(const ScenarioConfig&, const std::filesystem::path&, RunResult& res, std::ostream& log) {
  const auto overlap = bessel::regime_overlap();
  log << "bessel overlap max relative error: " << fmt(overlap.max_error) << " (J" << overlap.order << " at v = "
      << fmt(overlap.at) << ")\n";
  res.audits.push_back(at_most("bessel regime overlap", overlap.max_error, 1e-8));
  res.audits.push_back(at_most("bessel G(0) = 1/2", std::fabs(bessel::G(0.0) - 0.5), 1e-12));
  res.audits.push_back(at_most("bessel G'(v)/v -> -1/8", std::fabs(bessel::gprime_over_v(1e-8) + 0.125), 1e-12));
}

inline void run_composite(const ScenarioConfig& c, const std::filesystem::path& dir, RunResult& res) {
  const auto p = params(c);
  osc::CompositeOptions opt;
  opt.tube = geometry::Tube(c.tube_R);
  opt.admissibility_grid = static_cast<std::size_t>(c.grid_n);
  opt.norm.lanczos.seed = c.seed;
  CsvWriter csv({"lambda", "T", "eps", "n_nodes", "norm_nonstationary", "norm_left_fold", "norm_right_fold",
                 "norm_young", "young_schur", "total", "reference", "implied_C", "partition_error"});
  double worst_C = -std::numeric_limits<double>::infinity();
  bool all_passed = true;
  double partition = 0.0;
  for (double lambda : c.lambda_grid) {
    if (lambda > c.composite_lambda_max) continue;
    const auto a = osc::composite_bound_audit(p, lambda, c.T, c.epsilon, opt);
    csv.row({fmt(lambda), fmt(c.T), fmt(c.epsilon), std::to_string(a.n_nodes), fmt(a.pieces[0].norm),
             fmt(a.pieces[1].norm), fmt(a.pieces[2].norm), fmt(a.pieces[3].norm), fmt(a.young_schur), fmt(a.total),
             fmt(a.reference), fmt(a.implied_C), fmt(a.partition_error)});
    worst_C = std::max(worst_C, a.implied_C);
    all_passed = all_passed && a.passed();
    partition = std::max(partition, a.partition_error);
  }
  write_file(dir, "composite.csv", csv.text(), res);
  res.audits.push_back(at_most("composite implied C", worst_C, 25.0));
  res.audits.push_back(at_most("composite partition of unity", partition, 1e-12));
  res.audits.push_back({"composite Young piece under Schur bound", all_passed, all_passed ? 1.0 : 0.0, 1.0, ""});

  // Parameter law T = c ln lambda, eps = e^{-CT} / T, with C at least 1.
  const double C = std::max(1.0, worst_C);
  const double coef = c.log_coefficient > 0.0 ? c.log_coefficient : osc::default_log_coefficient(C);
  CsvWriter assembled({"lambda", "c", "C", "T", "eps", "bound", "ratio"});
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (int k = 8; k <= 14; ++k) {
    const auto b = osc::assembled_bound(std::ldexp(1.0, k), coef, C);
    assembled.row({fmt(b.lambda), fmt(coef), fmt(C), fmt(b.T), fmt(b.eps), fmt(b.bound), fmt(b.ratio)});
    rmin = std::min(rmin, b.ratio);
    rmax = std::max(rmax, b.ratio);
  }
  write_file(dir, "assembled_bound.csv", assembled.text(), res);
  res.audits.push_back(at_most("assembled bound over lambda/log lambda spread", rmax / rmin, 4.0));
}

}  // namespace detail

/// Runs one subcommand, writing its files into `out_dir` and a summary to `log`.
inline RunResult run_subcommand(std::string_view name, const ScenarioConfig& config,
                                const std::filesystem::path& out_dir, std::ostream& log) {
  RunResult res;
  const std::map<std::string, std::function<void()>, std::less<>> table{
      {"phase", [&] { detail::run_phase(config, out_dir, res); }},
      {"bounds", [&] { detail::run_bounds(config, out_dir, res); }},
      {"kernel", [&] { detail::run_kernel(config, out_dir, res); }},
      {"decay", [&] { detail::run_decay(config, out_dir, res); }},
      {"bessel", [&] { detail::run_bessel(config, out_dir, res, log); }},
      {"composite", [&] { detail::run_composite(config, out_dir, res); }},
  };
  const auto it = table.find(name);
  if (it == table.end()) {
    log << "error: unknown subcommand " << name << "\n";
    res.exit_code = kInvalidConfig;
    return res;
  }
  try {
    std::filesystem::create_directories(out_dir);
    it->second();
  } catch (const phase::PreconditionError& e) {
    log << "precondition failed: " << e.what() << "\n";
    res.exit_code = kAuditFailure;
    return res;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << "\n";
    res.exit_code = kInvalidConfig;
    return res;
  } catch (const std::exception& e) {
    log << "failure: " << e.what() << "\n";
    res.exit_code = kAuditFailure;
    return res;
  }
  for (const auto& a : res.audits) {
    log << (a.passed ? "PASS " : "FAIL ") << a.name << ": measured " << fmt(a.measured) << ", threshold "
        << fmt(a.threshold);
    if (!a.details.empty()) log << " (" << a.details << ")";
    log << "\n";
    if (!a.passed) res.exit_code = kAuditFailure;
  }
  for (const auto& f : res.files) log << "wrote " << (out_dir / f).string() << "\n";
  return res;
}

}  // namespace hyperfold::harness
