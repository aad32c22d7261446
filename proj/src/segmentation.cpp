#include "levelgen/segmentation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "levelgen/clustering.hpp"

namespace levelgen {

void SegmentationParams::validate() const {
  if (!(boundary_threshold > 0.0 && boundary_threshold <= endpoint_threshold && endpoint_threshold <= 1.0)) {
    throw ValidationError("segmentation: need 0 < boundary_threshold <= endpoint_threshold <= 1");
  }
}

SectionSet segment_trace(const Trace& trace, const SegmentationParams& params, const std::string& trace_id) {
  params.validate();
  if (trace.frames.empty()) throw ValidationError("trace has no frames");

  std::vector<std::size_t> starts{0};
  std::vector<char> endpoint{0};
  std::size_t rep = 0;
  for (std::size_t k = 1; k < trace.frames.size(); ++k) {
    if (frame_difference(trace.frames[rep], trace.frames[k]) > params.boundary_threshold) {
      starts.push_back(k);
      endpoint.push_back(frame_difference(trace.frames[k - 1], trace.frames[k]) >= params.endpoint_threshold);
      rep = k;
    }
  }

  SectionSet out;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    const Frame& first = trace.frames[starts[s]];
    LevelSection section;
    section.trace_id = trace_id;
    section.start_frame = first.index();
    section.end_frame = s + 1 < starts.size() ? trace.frames[starts[s + 1]].index() - 1 : trace.frames.back().index();
    section.representative = first;
    section.interaction_value = section.end_frame - section.start_frame + 1;
    if (endpoint[s]) out.endpoints.push_back(section.start_frame);
    if (first.empty()) {
      out.dropped.push_back(std::move(section));
    } else {
      out.sections.push_back(std::move(section));
    }
  }
  return out;
}

std::vector<InteractionValue> interaction_values(const SectionSet& sections, double fps) {
  std::vector<InteractionValue> out;
  out.reserve(sections.sections.size());
  for (std::size_t i = 0; i < sections.sections.size(); ++i) {
    const int frames = sections.sections[i].interaction_value;
    out.push_back({i, frames, fps > 0.0 ? frames / fps : 0.0});
  }
  return out;
}

std::vector<bool> high_interaction_flags(const std::vector<LevelSection>& sections) {
  std::vector<bool> flags(sections.size(), false);
  if (sections.empty()) return flags;
  // Compare n * value against the integer sum to avoid rounding the mean.
  long long total = 0;
  for (const auto& s : sections) total += s.interaction_value;
  const auto n = static_cast<long long>(sections.size());
  for (std::size_t i = 0; i < sections.size(); ++i) {
    flags[i] = n * sections[i].interaction_value > total;
  }
  return flags;
}

std::vector<LevelSection> select_high_interaction(const std::vector<LevelSection>& sections) {
  const auto flags = high_interaction_flags(sections);
  std::vector<LevelSection> out;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (flags[i]) out.push_back(sections[i]);
  }
  return out;
}

void CategoryParams::validate() const {
  if (k_max < 1) throw ValidationError("categories: k_max must be at least 1");
  if (!(fk_threshold > 0.0)) throw ValidationError("categories: fk_threshold must be positive");
}

SectionCategories categorize_sections(const std::vector<LevelSection>& sections, const SpriteCatalog& catalog,
                                      const CategoryParams& params) {
  params.validate();
  if (sections.empty()) throw ValidationError("categorize_sections: no sections to cluster");
  Eigen::MatrixXd points(static_cast<Eigen::Index>(sections.size()), static_cast<Eigen::Index>(catalog.size()));
  for (std::size_t i = 0; i < sections.size(); ++i) {
    points.row(static_cast<Eigen::Index>(i)) = count_vector(sections[i], catalog).transpose();
  }
  const int k_max = std::min<int>(params.k_max, static_cast<int>(sections.size()));
  const int k = clustering::estimate_k(points, k_max, params.seed, params.fk_threshold).k;
  const auto result = clustering::kmeans(points, k, params.seed);

  std::map<int, int> relabel;
  for (int a : result.assignment) relabel.emplace(a, static_cast<int>(relabel.size()));
  SectionCategories out;
  out.k = k;
  out.distortion = result.distortion;
  out.members.resize(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < sections.size(); ++i) {
    const int c = relabel.at(result.assignment[i]);
    out.assignment.push_back(c);
    out.members[static_cast<std::size_t>(c)].push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace levelgen
