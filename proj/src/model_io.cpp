#include "levelgen/model_io.hpp"

#include "levelgen/detail/json_util.hpp"
#include "levelgen/trace_io.hpp"

namespace levelgen {

using detail::json;

namespace {

json tile_json(const Tile& t) { return json::array({t.x, t.y}); }

Tile tile_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ParseError(where + ": expected [x, y]");
  return {detail::get_as<int>(j[0], where), detail::get_as<int>(j[1], where)};
}

json pair_json(const ShapePair& p) {
  json cells = json::array();
  for (const auto& c : p.g.cells) cells.push_back(tile_json(c));
  json relations = json::array();
  for (const auto& r : p.d.relations) {
    relations.push_back(json::array({r.target_type, r.corner.x, r.corner.y, r.center.x(), r.center.y()}));
  }
  return {{"type", p.g.type},
          {"section", p.g.source_section},
          {"anchor", tile_json(p.g.anchor)},
          {"cells", cells},
          {"relations", relations}};
}

ShapePair pair_from(const json& j, const std::string& where) {
  ShapePair p;
  p.g.type = detail::get_field<int>(j, "type", where);
  p.g.source_section = detail::get_field<int>(j, "section", where);
  p.g.anchor = tile_from(detail::field(j, "anchor", where), where + ".anchor");
  const json& cells = detail::field(j, "cells", where);
  for (std::size_t i = 0; i < cells.size(); ++i) p.g.cells.push_back(tile_from(cells[i], where + ".cells"));
  const json& relations = detail::field(j, "relations", where);
  for (std::size_t i = 0; i < relations.size(); ++i) {
    const std::string at = where + ".relations[" + std::to_string(i) + "]";
    const json& r = relations[i];
    if (!r.is_array() || r.size() != 5) throw ParseError(at + ": expected [type, cx, cy, mx, my]");
    Relation rel;
    rel.target_type = detail::get_as<int>(r[0], at);
    rel.corner = {detail::get_as<int>(r[1], at), detail::get_as<int>(r[2], at)};
    rel.center = {detail::get_as<double>(r[3], at), detail::get_as<double>(r[4], at)};
    p.d.relations.push_back(rel);
  }
  return p;
}

json params_json(const ModelParams& p) {
  return {{"seed", p.seed},
          {"k_max", p.k_max},
          {"fk_threshold", p.fk_threshold},
          {"shape_weight", p.shape_weight},
          {"bucket_count", p.bucket_count},
          {"pair_dims", p.pair_dims},
          {"ignored_types", p.ignored_types}};
}

ModelParams params_from(const json& j, const std::string& where) {
  ModelParams p;
  p.seed = detail::get_field<std::uint64_t>(j, "seed", where);
  p.k_max = detail::get_field<int>(j, "k_max", where);
  p.fk_threshold = detail::get_field<double>(j, "fk_threshold", where);
  p.shape_weight = detail::get_field<double>(j, "shape_weight", where);
  p.bucket_count = detail::get_field<int>(j, "bucket_count", where);
  p.pair_dims = detail::get_field<double>(j, "pair_dims", where);
  p.ignored_types = detail::get_field<std::vector<int>>(j, "ignored_types", where);
  return p;
}

}  // namespace

std::string dump_model(const StyleModel& model) {
  json doc;
  doc["version"] = kModelSchemaVersion;
  doc["tile_size_px"] = model.catalog.tile_size_px();
  doc["catalog"] = detail::catalog_to_json(model.catalog);
  doc["width"] = model.width;
  doc["height"] = model.height;
  doc["params"] = params_json(model.params);
  doc["max_distance"] = model.max_distance;

  json sections = json::array();
  for (std::size_t i = 0; i < model.sections.size(); ++i) {
    json counts = json::array();
    for (Eigen::Index c = 0; c < model.n_node.cols(); ++c) counts.push_back(model.n_node(static_cast<Eigen::Index>(i), c));
    sections.push_back({{"id", model.section_ids.at(i)},
                        {"frame", model.sections[i].index()},
                        {"instances", detail::instances_to_json(model.sections[i].instances())},
                        {"counts", counts}});
  }
  doc["sections"] = sections;

  json s_nodes = json::array();
  for (const auto& s : model.s_nodes) {
    json members = json::array();
    for (const auto& m : s.members) members.push_back(pair_json(m));
    json table = json::array();
    for (const auto& [key, count] : s.table.counts) table.push_back(json::array({key.from, key.to, key.bucket, count}));
    s_nodes.push_back({{"id", s.id}, {"type", s.type}, {"members", members}, {"table", table}});
  }
  doc["s_nodes"] = s_nodes;

  json l_nodes = json::array();
  for (const auto& l : model.l_nodes) l_nodes.push_back({{"id", l.id}, {"s_nodes", l.s_nodes}, {"sections", l.sections}});
  doc["l_nodes"] = l_nodes;
  return doc.dump(1) + "\n";
}

StyleModel parse_model(std::string_view text, const std::string& source) {
  const json doc = detail::parse_json_text(text, source);
  detail::check_version(doc, kModelSchemaVersion, source);

  StyleModel model;
  model.catalog = detail::catalog_from_json(detail::field(doc, "catalog", source),
                                            detail::get_field_or<int>(doc, "tile_size_px", 16, source),
                                            source + ".catalog");
  model.width = detail::get_field<int>(doc, "width", source);
  model.height = detail::get_field<int>(doc, "height", source);
  model.params = params_from(detail::field(doc, "params", source), source + ".params");
  model.max_distance = detail::get_field<double>(doc, "max_distance", source);

  const json& sections = detail::field(doc, "sections", source);
  const auto types = static_cast<Eigen::Index>(model.catalog.size());
  model.n_node = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sections.size()), types);
  for (std::size_t i = 0; i < sections.size(); ++i) {
    const std::string where = source + ".sections[" + std::to_string(i) + "]";
    model.section_ids.push_back(detail::get_field<std::string>(sections[i], "id", where));
    model.sections.emplace_back(detail::get_field_or<int>(sections[i], "frame", 0, where), model.width, model.height,
                                detail::instances_from_json(detail::field(sections[i], "instances", where),
                                                            where + ".instances"));
    const auto counts = detail::get_field<std::vector<double>>(sections[i], "counts", where);
    if (static_cast<Eigen::Index>(counts.size()) != types) {
      throw ValidationError(where + ".counts: expected " + std::to_string(types) + " entries");
    }
    for (Eigen::Index c = 0; c < types; ++c) model.n_node(static_cast<Eigen::Index>(i), c) = counts[static_cast<std::size_t>(c)];
  }

  const json& s_nodes = detail::field(doc, "s_nodes", source);
  for (std::size_t i = 0; i < s_nodes.size(); ++i) {
    const std::string where = source + ".s_nodes[" + std::to_string(i) + "]";
    SNode s;
    s.id = detail::get_field<int>(s_nodes[i], "id", where);
    if (s.id != static_cast<int>(i)) throw ValidationError(where + ".id: ids must be dense and in order");
    s.type = detail::get_field<int>(s_nodes[i], "type", where);
    const json& members = detail::field(s_nodes[i], "members", where);
    for (std::size_t m = 0; m < members.size(); ++m) {
      s.members.push_back(pair_from(members[m], where + ".members[" + std::to_string(m) + "]"));
    }
    s.table.max_distance = model.max_distance;
    s.table.bucket_count = model.params.bucket_count;
    for (const auto& row : detail::field(s_nodes[i], "table", where)) {
      if (!row.is_array() || row.size() != 4) throw ParseError(where + ".table: expected [from, to, bucket, count]");
      const int count = row[3].get<int>();
      s.table.counts[{row[0].get<int>(), row[1].get<int>(), row[2].get<int>()}] = count;
      s.table.total += count;
    }
    model.s_nodes.push_back(std::move(s));
  }

  const json& l_nodes = detail::field(doc, "l_nodes", source);
  for (std::size_t i = 0; i < l_nodes.size(); ++i) {
    const std::string where = source + ".l_nodes[" + std::to_string(i) + "]";
    LNode l;
    l.id = detail::get_field<int>(l_nodes[i], "id", where);
    l.s_nodes = detail::get_field<std::vector<int>>(l_nodes[i], "s_nodes", where);
    l.sections = detail::get_field<std::vector<int>>(l_nodes[i], "sections", where);
    for (int s : l.s_nodes) {
      if (s < 0 || s >= static_cast<int>(model.s_nodes.size())) throw ValidationError(where + ": unknown S-node " + std::to_string(s));
    }
    l.n_rows.resize(static_cast<Eigen::Index>(l.sections.size()), types);
    for (std::size_t r = 0; r < l.sections.size(); ++r) {
      const int row = l.sections[r];
      if (row < 0 || row >= model.n_node.rows()) throw ValidationError(where + ": unknown section " + std::to_string(row));
      l.n_rows.row(static_cast<Eigen::Index>(r)) = model.n_node.row(row);
    }
    model.l_nodes.push_back(std::move(l));
  }
  return model;
}

StyleModel load_model(const std::filesystem::path& path) { return parse_model(read_text_file(path), path.string()); }

void save_model(const StyleModel& model, const std::filesystem::path& path) { write_text_file(path, dump_model(model)); }

}  // namespace levelgen
