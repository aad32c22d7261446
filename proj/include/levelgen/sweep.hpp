#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levelgen/generator.hpp"
#include "levelgen/playability.hpp"
#include "levelgen/style.hpp"

namespace levelgen {

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y);
/// Pearson over average ranks.
std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y);
/// Throws std::invalid_argument on an empty list.
double median(std::vector<double> values);

/// k distinct indices from [0, n) drawn uniformly without replacement, in
/// draw order. k is clamped to n.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed);

struct SectionEvaluation {
  std::size_t index = 0;
  PlayabilityReport playability;
  StyleScore style;
};

struct EvaluationSummary {
  std::vector<SectionEvaluation> sections;
  /// Fraction in [0, 1].
  double percent_playable = 0.0;
  double median_style = 0.0;
};

struct EvaluationParams {
  JumpEnvelope envelope;
  std::vector<TypeId> standable;
  std::size_t sample_size = 20;
  std::uint64_t rng_seed = 0;
};

/// Samples sections (uniformly, without replacement) and scores playability
/// and style against the originals.
EvaluationSummary evaluate_sample(const std::vector<Frame>& generated, const std::vector<Frame>& originals,
                                  const EvaluationParams& params);

struct SweepRow {
  std::string varied;
  double p_C = 0.0;
  double p_E = 0.0;
  std::size_t sample_size = 0;
  double percent_playable = 0.0;
  double median_style = 0.0;
  std::size_t raw_count = 0;
  std::size_t output_count = 0;
  bool under_sampled = false;
  bool empty = false;
  bool truncated = false;
};

struct CorrelationRow {
  std::string parameter;
  std::string measure;
  std::optional<double> pearson;
  std::optional<double> spearman;
};

struct SweepConfig {
  std::vector<double> p_C_values{0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> p_E_values{0.01, 0.05, 0.1, 0.2, 0.3};
  double p_E_hold = 0.1;
  double p_C_hold = 0.8;
  GenerationParams generation;
  EvaluationParams evaluation;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<CorrelationRow> correlations;
};

SweepRow evaluate_setting(const StyleModel& model, const GenerationParams& generation,
                          const EvaluationParams& evaluation, const std::string& varied);

/// Varies p_C with p_E held, then p_E with p_C held. Empty rows are left out
/// of the correlations.
SweepResult sweep(const StyleModel& model, const SweepConfig& config);

/// CSV with header p_C,p_E,sample_size,percent_playable,median_style,raw_count
/// followed by a blank line and a correlation block.
std::string sweep_csv(const SweepResult& result);

/// One line per row flagged empty, under-sampled or truncated.
std::string sweep_notes(const SweepResult& result);

}  // namespace levelgen
