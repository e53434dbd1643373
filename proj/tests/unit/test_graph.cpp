#include <doctest.h>

#include "graph_instances.hpp"
#include "test_support.hpp"
#include "vismca/graph/ownership_graph.hpp"

using namespace vismca;
using namespace vismca::graph;
using annotation::CorrectionStore;
using vismca::testing::PartsBuilder;
using vismca::testing::stepping_clock;

namespace {

std::shared_ptr<const Dataset> toy() {
  PartsBuilder b;
  b.classes({"pen", "key", "cup"}).people({"P1", "P2", "P3"});
  b.image("a1", "P1").image("a2", "P1").image("b1", "P2").image("c1", "P3");
  b.det("d1", "a1", "key", 0.8).det("d2", "a1", "key", 0.6).det("d3", "a2", "key", 0.5).det("d4", "b1", "pen", 0.9);
  return b.build();
}

std::vector<std::string> names(const std::vector<SharedObject>& shared) {
  std::vector<std::string> out;
  for (const auto& s : shared) out.push_back(s.object);
  return out;
}

}  // namespace

TEST_CASE("corrected graph weights count images") {
  CorrectionStore s(toy(), stepping_clock());
  s.assign_labels("a1", {"pen"}, false);
  s.assign_labels("a2", {"pen", "key"}, false);
  const auto g = build_graph(s, Source::Corrected);
  CHECK(g.people_nodes().size() == 3);
  CHECK(g.object_nodes() == std::vector<std::string>{"pen", "key"});
  CHECK(g.known_objects().size() == 3);
  REQUIRE(g.edges().size() == 2);
  CHECK(g.edges()[0] == Edge{"P1", "key", 1, 1});
  CHECK(g.edges()[1] == Edge{"P1", "pen", 2, 2});
  CHECK(g.reference_images().at("pen") == "a1");
  CHECK(g.reference_images().at("key") == "a2");
}

TEST_CASE("detected graph counts images and instances") {
  CorrectionStore s(toy(), stepping_clock());
  const auto g = build_graph(s, Source::Detected);
  REQUIRE(g.edges().size() == 2);
  CHECK(g.edges()[0] == Edge{"P1", "key", 2, 3});
  CHECK(g.edges()[1] == Edge{"P2", "pen", 1, 1});
  CHECK(g.reference_images().at("key") == "a1");
}

TEST_CASE("empty store gives a people-only corrected graph") {
  CorrectionStore s(toy(), stepping_clock());
  const auto g = build_graph(s, Source::Corrected);
  CHECK(g.people_nodes().size() == 3);
  CHECK(g.object_nodes().empty());
  CHECK(g.edges().empty());
}

TEST_CASE("ego network") {
  CorrectionStore s(toy(), stepping_clock());
  s.assign_labels("a1", {"pen", "key"}, false);
  s.assign_labels("b1", {"pen"}, false);
  s.assign_labels("c1", {"cup"}, false);
  const auto g = build_graph(s, Source::Corrected);

  const auto narrow = ego_network(g, "pen", false);
  CHECK(narrow.focus == "pen");
  CHECK(narrow.owners == std::vector<std::string>{"P1", "P2"});
  for (const auto& e : narrow.edges) CHECK(e.object == "pen");

  const auto wide = ego_network(g, "pen", true);
  CHECK(wide.edges.size() == 3);

  CorrectionStore bare(toy(), stepping_clock());
  bare.assign_labels("a1", {"pen"}, false);
  const auto nobody = ego_network(build_graph(bare, Source::Corrected), "cup", true);
  CHECK(nobody.owners.empty());
  CHECK(nobody.edges.empty());

  try {
    (void)ego_network(g, "flyingCar", false);
    FAIL("expected UnknownObject");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownObject);
  }
}

TEST_CASE("shared objects and totem candidates") {
  oracle::DenseGraph d;
  d.people = {"P1", "P2", "P3"};
  d.objects = {"pen", "key", "cup", "hat"};
  d.images = {{2, 1, 0, 0}, {3, 0, 1, 0}, {2, 2, 0, 0}};
  const auto g = vismca::testing::to_graph(d);
  CHECK(names(objects_shared_by(g, 1, ShareMode::AtLeast)) == std::vector<std::string>{"pen", "key", "cup"});
  CHECK(objects_shared_by(g, 2, ShareMode::Exactly) == std::vector<SharedObject>{{"key", 2}});
  CHECK(objects_shared_by(g, 4, ShareMode::AtLeast).empty());
  CHECK_THROWS_AS(objects_shared_by(g, 0, ShareMode::AtLeast), Error);

  CHECK(totem_candidates(g, 3, 2) == std::vector<std::string>{"pen"});
  CHECK(totem_candidates(g, 2, 2).empty());
  CHECK(totem_candidates(g, 2, 1) == std::vector<std::string>{"key"});
  CHECK(totem_candidates(g, 10, 1).empty());

  const auto detected = vismca::testing::to_graph(d, Source::Detected);
  try {
    (void)totem_candidates(detected, 3, 2);
    FAIL("expected WrongSource");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::WrongSource);
  }
}

TEST_CASE("graph queries match the dense oracle") {
  std::mt19937_64 rng(17);
  for (int instance = 0; instance < 300; ++instance) {
    const auto d = vismca::testing::random_dense_graph(rng);
    const auto g = vismca::testing::to_graph(d);
    for (std::size_t k = 1; k <= d.people.size() + 1; ++k) {
      for (bool exactly : {false, true}) {
        std::vector<std::pair<std::string, std::size_t>> got;
        for (const auto& s : objects_shared_by(g, k, exactly ? ShareMode::Exactly : ShareMode::AtLeast)) {
          got.emplace_back(s.object, s.owner_count);
        }
        CHECK(got == d.shared(k, exactly));
      }
      for (std::size_t m = 1; m <= 3; ++m) CHECK(totem_candidates(g, k, m) == d.totem(k, m));
    }
    for (std::size_t o = 0; o < d.objects.size(); ++o) {
      for (bool neighbors : {false, true}) {
        const auto ego = ego_network(g, d.objects[o], neighbors);
        const auto [owners, edges] = d.ego(o, neighbors);
        CHECK(ego.owners == owners);
        std::set<std::pair<std::string, std::string>> got;
        for (const auto& e : ego.edges) got.emplace(e.person, e.object);
        CHECK(got == edges);
        CHECK(got.size() == ego.edges.size());
      }
    }
  }
}
