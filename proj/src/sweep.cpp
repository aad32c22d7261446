#include "levelgen/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "levelgen/clustering.hpp"

namespace levelgen {

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 2) return std::nullopt;
  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(x.data(), n).array() -
                            Eigen::Map<const Eigen::VectorXd>(x.data(), n).mean();
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(y.data(), n).array() -
                            Eigen::Map<const Eigen::VectorXd>(y.data(), n).mean();
  const double denom = a.norm() * b.norm();
  if (denom <= 0.0) return std::nullopt;
  return std::clamp(a.dot(b) / denom, -1.0, 1.0);
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
  return pearson(average_ranks(x), average_ranks(y));
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  k = std::min(k, n);
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.index(n - i)]);
  pool.resize(k);
  return pool;
}

EvaluationSummary evaluate_sample(const std::vector<Frame>& generated, const std::vector<Frame>& originals,
                                  const EvaluationParams& params) {
  EvaluationSummary out;
  if (generated.empty()) return out;
  std::size_t playable = 0;
  std::vector<double> styles;
  for (std::size_t i : sample_indices(generated.size(), params.sample_size, params.rng_seed)) {
    SectionEvaluation e;
    e.index = i;
    e.playability = is_playable(generated[i], params.standable, params.envelope);
    e.style = style_distance(generated[i], originals);
    playable += e.playability.playable;
    styles.push_back(e.style.score);
    out.sections.push_back(std::move(e));
  }
  out.percent_playable = static_cast<double>(playable) / static_cast<double>(out.sections.size());
  out.median_style = median(styles);
  return out;
}

SweepRow evaluate_setting(const StyleModel& model, const GenerationParams& generation,
                          const EvaluationParams& evaluation, const std::string& varied) {
  const GenerationResult result = generate_all(model, generation);
  std::vector<Frame> layouts;
  for (const auto& g : result.sections) layouts.push_back(g.layout);
  const EvaluationSummary summary = evaluate_sample(layouts, model.sections, evaluation);

  SweepRow row;
  row.varied = varied;
  row.p_C = generation.p_C;
  row.p_E = generation.p_E;
  row.sample_size = summary.sections.size();
  row.percent_playable = summary.percent_playable;
  row.median_style = summary.median_style;
  row.raw_count = result.raw_count;
  row.output_count = layouts.size();
  row.under_sampled = layouts.size() < evaluation.sample_size;
  row.empty = layouts.empty();
  row.truncated = result.truncated;
  return row;
}

SweepResult sweep(const StyleModel& model, const SweepConfig& config) {
  SweepResult out;
  auto run = [&](const std::string& varied, const std::vector<double>& values) {
    std::vector<double> xs, playable, style;
    for (double v : values) {
      GenerationParams g = config.generation;
      g.p_C = varied == "p_C" ? v : config.p_C_hold;
      g.p_E = varied == "p_E" ? v : config.p_E_hold;
      SweepRow row = evaluate_setting(model, g, config.evaluation, varied);
      if (!row.empty) {
        xs.push_back(v);
        playable.push_back(row.percent_playable);
        style.push_back(row.median_style);
      }
      out.rows.push_back(row);
    }
    out.correlations.push_back({varied, "percent_playable", pearson(xs, playable), spearman(xs, playable)});
    out.correlations.push_back({varied, "median_style", pearson(xs, style), spearman(xs, style)});
  };
  if (!config.p_C_values.empty()) run("p_C", config.p_C_values);
  if (!config.p_E_values.empty()) run("p_E", config.p_E_values);
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out.precision(6);
  out << "p_C,p_E,sample_size,percent_playable,median_style,raw_count\n";
  for (const auto& r : result.rows) {
    out << r.p_C << ',' << r.p_E << ',' << r.sample_size << ',' << r.percent_playable << ',' << r.median_style << ','
        << r.raw_count << '\n';
  }
  out << "\nparameter,measure,pearson,spearman\n";
  auto cell = [](const std::optional<double>& v) { return v ? std::to_string(*v) : std::string("undefined"); };
  for (const auto& c : result.correlations) {
    out << c.parameter << ',' << c.measure << ',' << cell(c.pearson) << ',' << cell(c.spearman) << '\n';
  }
  return out.str();
}

std::string sweep_notes(const SweepResult& result) {
  std::ostringstream out;
  out.precision(6);
  for (const auto& r : result.rows) {
    if (!r.empty && !r.under_sampled && !r.truncated) continue;
    out << "p_C=" << r.p_C << " p_E=" << r.p_E << ':';
    if (r.empty) out << " empty";
    if (r.under_sampled) out << " under_sampled(" << r.sample_size << ')';
    if (r.truncated) out << " truncated";
    out << '\n';
  }
  return out.str();
}

}  // namespace levelgen
