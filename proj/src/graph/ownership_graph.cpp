#include "vismca/graph/ownership_graph.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace vismca::graph {

std::string_view source_name(Source s) noexcept {
  return s == Source::Detected ? "detected" : "corrected";
}

OwnershipGraph::OwnershipGraph(Source source, std::vector<std::string> people,
                               std::vector<std::string> known_objects, std::vector<Edge> edges,
                               std::map<std::string, std::string, std::less<>> reference_images)
    : source_(source),
      people_(std::move(people)),
      known_objects_(std::move(known_objects)),
      edges_(std::move(edges)),
      reference_images_(std::move(reference_images)) {
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.person, a.object) < std::tie(b.person, b.object);
  });
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    by_object_[edges_[i].object].push_back(i);
    by_person_[edges_[i].person].push_back(i);
  }
  // Object nodes keep the dataset class order.
  for (const auto& o : known_objects_) {
    if (by_object_.contains(o)) objects_.push_back(o);
  }
}

bool OwnershipGraph::is_known_object(std::string_view object) const {
  return std::find(known_objects_.begin(), known_objects_.end(), object) != known_objects_.end();
}

std::vector<const Edge*> OwnershipGraph::edges_of_object(std::string_view object) const {
  std::vector<const Edge*> out;
  if (auto it = by_object_.find(object); it != by_object_.end()) {
    for (std::size_t i : it->second) out.push_back(&edges_[i]);
  }
  return out;
}

std::vector<const Edge*> OwnershipGraph::edges_of_person(std::string_view person) const {
  std::vector<const Edge*> out;
  if (auto it = by_person_.find(person); it != by_person_.end()) {
    for (std::size_t i : it->second) out.push_back(&edges_[i]);
  }
  return out;
}

OwnershipGraph build_graph(const annotation::CorrectionStore& store, Source source) {
  const Dataset& dataset = store.dataset();
  std::map<std::pair<std::string_view, std::string_view>, Edge> acc;
  std::map<std::string, std::string, std::less<>> reference;

  auto note_reference = [&](std::string_view object, const std::string& image) {
    auto [it, inserted] = reference.try_emplace(std::string(object), image);
    if (!inserted && image < it->second) it->second = image;
  };

  for (const auto& img : dataset.images()) {
    if (source == Source::Corrected) {
      const auto* rec = store.record(img.id);
      if (!rec) continue;
      for (const auto& label : rec->labels) {
        Edge& e = acc[{img.person, label}];
        e.person = img.person;
        e.object = label;
        ++e.weight_images;
        ++e.weight_instances;
        note_reference(label, img.id);
      }
    } else {
      std::set<std::string_view> seen;
      for (const Detection& det : dataset.detections_of(img.id)) {
        Edge& e = acc[{img.person, det.class_name}];
        e.person = img.person;
        e.object = det.class_name;
        ++e.weight_instances;
        if (seen.insert(det.class_name).second) ++e.weight_images;
        note_reference(det.class_name, img.id);
      }
    }
  }

  std::vector<Edge> edges;
  edges.reserve(acc.size());
  for (auto& [key, e] : acc) edges.push_back(std::move(e));
  return OwnershipGraph(source, dataset.people(), dataset.classes(), std::move(edges), std::move(reference));
}

EgoNetwork ego_network(const OwnershipGraph& graph, std::string_view object, bool include_neighbor_objects) {
  if (!graph.is_known_object(object)) {
    throw Error(Errc::UnknownObject, "unknown object '" + std::string(object) + "'");
  }
  EgoNetwork ego;
  ego.focus = std::string(object);
  for (const Edge* e : graph.edges_of_object(object)) {
    ego.owners.push_back(e->person);
    if (include_neighbor_objects) {
      for (const Edge* other : graph.edges_of_person(e->person)) ego.edges.push_back(*other);
    } else {
      ego.edges.push_back(*e);
    }
  }
  std::sort(ego.owners.begin(), ego.owners.end());
  std::sort(ego.edges.begin(), ego.edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.person, a.object) < std::tie(b.person, b.object);
  });
  return ego;
}

std::vector<SharedObject> objects_shared_by(const OwnershipGraph& graph, std::size_t k, ShareMode mode) {
  if (k < 1) throw Error(Errc::BadArgument, "k must be at least 1");
  std::vector<SharedObject> out;
  for (const auto& object : graph.object_nodes()) {
    const std::size_t owners = graph.edges_of_object(object).size();
    const bool keep = mode == ShareMode::Exactly ? owners == k : owners >= k;
    if (keep) out.push_back({object, owners});
  }
  std::sort(out.begin(), out.end(), [](const SharedObject& a, const SharedObject& b) {
    if (a.owner_count != b.owner_count) return a.owner_count > b.owner_count;
    return a.object < b.object;
  });
  return out;
}

std::vector<std::string> totem_candidates(const OwnershipGraph& graph, std::size_t group_size,
                                          std::size_t min_images) {
  if (graph.source() != Source::Corrected) {
    throw Error(Errc::WrongSource, "totem analysis needs a graph built from corrected labels");
  }
  if (group_size < 1 || min_images < 1) {
    throw Error(Errc::BadArgument, "group_size and min_images must be at least 1");
  }
  std::vector<std::string> out;
  for (const auto& object : graph.object_nodes()) {
    const auto edges = graph.edges_of_object(object);
    if (edges.size() != group_size) continue;
    const bool all_repeat = std::all_of(edges.begin(), edges.end(),
                                        [&](const Edge* e) { return e->weight_images >= min_images; });
    if (all_repeat) out.push_back(object);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace vismca::graph
