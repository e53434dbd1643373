#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vismca/annotation/store.hpp"

namespace vismca::graph {

enum class Source { Detected, Corrected };

std::string_view source_name(Source s) noexcept;  // "detected" / "corrected"

struct Edge {
  std::string person;
  std::string object;
  std::size_t weight_images = 0;
  std::size_t weight_instances = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Bipartite people/objects network. People nodes are all dataset people;
/// object nodes are the objects with at least one edge. Edges are sorted by
/// (person, object).
class OwnershipGraph {
 public:
  OwnershipGraph(Source source, std::vector<std::string> people, std::vector<std::string> known_objects,
                 std::vector<Edge> edges, std::map<std::string, std::string, std::less<>> reference_images);

  [[nodiscard]] Source source() const noexcept { return source_; }
  [[nodiscard]] const std::vector<std::string>& people_nodes() const noexcept { return people_; }
  [[nodiscard]] const std::vector<std::string>& object_nodes() const noexcept { return objects_; }
  /// Every class of the dataset, owned or not.
  [[nodiscard]] const std::vector<std::string>& known_objects() const noexcept { return known_objects_; }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
  [[nodiscard]] const std::map<std::string, std::string, std::less<>>& reference_images() const noexcept {
    return reference_images_;
  }

  [[nodiscard]] bool is_known_object(std::string_view object) const;
  /// Edges incident to one object, sorted by person.
  [[nodiscard]] std::vector<const Edge*> edges_of_object(std::string_view object) const;
  /// Edges incident to one person, sorted by object.
  [[nodiscard]] std::vector<const Edge*> edges_of_person(std::string_view person) const;

 private:
  Source source_;
  std::vector<std::string> people_;
  std::vector<std::string> objects_;
  std::vector<std::string> known_objects_;
  std::vector<Edge> edges_;
  std::map<std::string, std::string, std::less<>> reference_images_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_object_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_person_;
};

/// Corrected: edge (p, o) when some image of p has o in its corrected labels,
/// weighted by the number of such images. Detected: edge when p's images hold
/// a detection of o; weight_images counts those images and weight_instances
/// the detections. reference_image(o) is the smallest qualifying image id.
OwnershipGraph build_graph(const annotation::CorrectionStore& store, Source source);

struct EgoNetwork {
  std::string focus;
  std::vector<std::string> owners;  // sorted
  std::vector<Edge> edges;          // sorted by (person, object)
};

/// Owners of `object` and their edges to it; with include_neighbor_objects,
/// also every other edge of those owners. Throws Error(UnknownObject) for a
/// name that is not a dataset class.
EgoNetwork ego_network(const OwnershipGraph& graph, std::string_view object, bool include_neighbor_objects);

enum class ShareMode { Exactly, AtLeast };

struct SharedObject {
  std::string object;
  std::size_t owner_count = 0;

  friend bool operator==(const SharedObject&, const SharedObject&) = default;
};

/// Objects whose distinct owner count is exactly / at least k, sorted by
/// owner count descending then name. Throws Error(BadArgument) when k < 1.
std::vector<SharedObject> objects_shared_by(const OwnershipGraph& graph, std::size_t k, ShareMode mode);

inline constexpr std::size_t kDefaultTotemGroupSize = 8;
inline constexpr std::size_t kDefaultTotemMinImages = 2;

/// Objects owned by exactly group_size people where every owner has at
/// least min_images images of it, sorted by name. Only meaningful on
/// corrected data: throws Error(WrongSource) for a detected graph.
std::vector<std::string> totem_candidates(const OwnershipGraph& graph,
                                          std::size_t group_size = kDefaultTotemGroupSize,
                                          std::size_t min_images = kDefaultTotemMinImages);

}  // namespace vismca::graph
