#include "vismca/fixture/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace vismca::fixture {

namespace {

// std::*_distribution output differs between standard libraries; these
// helpers only use raw engine output so a seed means the same corpus
// everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  double real(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53);
  }
  bool chance(double p) { return real(0.0, 1.0) < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  std::vector<std::size_t> sample(std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    shuffle(idx);
    idx.resize(k);
    return idx;
  }

 private:
  std::mt19937_64 engine_;
};

enum class Role { Totem, ExactlyEight, Wide, Missed, OtherDetected, OtherUndetected };

// Thirteen detected and twenty undetected classes fill the corpus out to 43.
constexpr std::array<std::string_view, 13> kOtherDetected = {
    "birdCall", "bowlingPins", "cactus", "carabiner", "cowboyHat", "fork", "hairClip",
    "paperPlate", "redBow", "rubberDuck", "spoon", "trophy", "yellowBag"};
constexpr std::array<std::string_view, 20> kOtherUndetected = {
    "blueBall", "brassBell", "chessPiece", "cloudSign", "eyeball", "glassJar", "greenCup",
    "hubcap", "leatherWallet", "paintBrush", "plasticBird", "pumpkinNotes", "redDinosaur",
    "sign", "silverWatch", "stickerBox", "toyCar", "turtle", "vancouverFlag", "woodenSpoon"};

struct ClassInfo {
  std::string name;
  Role role;
};

bool detected_role(Role r) {
  return r == Role::Totem || r == Role::ExactlyEight || r == Role::Wide || r == Role::OtherDetected;
}

// Edges that may absorb extra images without breaking an ownership rule.
unsigned filler_weight(Role r) {
  switch (r) {
    case Role::Wide: return 3;
    case Role::OtherDetected: return 2;
    case Role::Totem:
    case Role::OtherUndetected: return 1;
    default: return 0;
  }
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

struct ImageSize {
  int w, h;
};
constexpr std::array<ImageSize, 3> kSizes = {{{1024, 768}, {1280, 960}, {800, 600}}};

BBox random_box(Rng& rng, const ImageRecord& img) {
  const auto w = rng.between(40, static_cast<std::size_t>(img.width / 3));
  const auto h = rng.between(40, static_cast<std::size_t>(img.height / 3));
  const auto x = rng.between(0, static_cast<std::size_t>(img.width) - w);
  const auto y = rng.between(0, static_cast<std::size_t>(img.height) - h);
  return BBox{double(x), double(y), double(w), double(h)};
}

// Same size, shifted by at most a tenth of the box in each direction.
BBox jittered_box(Rng& rng, const ImageRecord& img, const BBox& base) {
  const double dx = std::floor(rng.real(-0.1, 0.1) * base.w);
  const double dy = std::floor(rng.real(-0.1, 0.1) * base.h);
  const double x = std::clamp(base.x + dx, 0.0, img.width - base.w);
  const double y = std::clamp(base.y + dy, 0.0, img.height - base.h);
  return BBox{x, y, base.w, base.h};
}

std::string numbered(const char* prefix, std::size_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, n);
  return buf;
}

}  // namespace

DatasetParts generate(std::uint64_t seed) {
  Rng rng(seed);

  std::vector<ClassInfo> classes;
  classes.push_back({std::string(kTotem), Role::Totem});
  for (auto n : kExactlyEight) {
    if (n != kTotem) classes.push_back({std::string(n), Role::ExactlyEight});
  }
  for (auto n : kWidelyShared) classes.push_back({std::string(n), Role::Wide});
  classes.push_back({std::string(kMissedObject), Role::Missed});
  for (auto n : kOtherDetected) classes.push_back({std::string(n), Role::OtherDetected});
  for (auto n : kOtherUndetected) classes.push_back({std::string(n), Role::OtherUndetected});
  std::sort(classes.begin(), classes.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  const std::size_t C = classes.size();
  const std::size_t P = kPeople;

  std::vector<std::string> people(P);
  for (std::size_t p = 0; p < P; ++p) people[p] = "Person" + std::to_string(p + 1);
  const std::size_t single_overlap =
      static_cast<std::size_t>(std::find(people.begin(), people.end(), kSingleOverlapPerson) - people.begin());

  // Images per person: half get 23, half 22.
  std::vector<std::size_t> image_count(P, kImages / P);
  {
    auto order = rng.sample(P, P);
    for (std::size_t i = 0; i < kImages % P; ++i) ++image_count[order[i]];
  }

  // own[p][c] = number of p's images labeled with c.
  std::vector<std::vector<std::size_t>> own(P, std::vector<std::size_t>(C, 0));
  for (std::size_t c = 0; c < C; ++c) {
    switch (classes[c].role) {
      case Role::Missed:
        for (auto name : kMissedObjectOwners) {
          const auto p = static_cast<std::size_t>(std::find(people.begin(), people.end(), name) - people.begin());
          own[p][c] = rng.between(1, 2);
        }
        break;
      case Role::Totem:
        for (auto p : rng.sample(P, 8)) own[p][c] = rng.between(2, 3);
        break;
      case Role::ExactlyEight: {
        const auto owners = rng.sample(P, 8);
        for (auto p : owners) own[p][c] = rng.between(1, 3);
        own[owners[rng.below(owners.size())]][c] = 1;
        break;
      }
      case Role::Wide:
        for (auto p : rng.sample(P, rng.between(14, 24))) own[p][c] = 1;
        break;
      case Role::OtherDetected:
      case Role::OtherUndetected:
        for (auto p : rng.sample(P, rng.between(2, 7))) own[p][c] = 1;
        break;
    }
  }

  std::vector<std::size_t> wide;
  for (std::size_t c = 0; c < C; ++c) {
    if (classes[c].role == Role::Wide) wide.push_back(c);
  }
  auto add_wide = [&](std::size_t p) {
    std::vector<std::size_t> free;
    for (auto c : wide) {
      if (own[p][c] == 0) free.push_back(c);
    }
    if (free.empty()) return false;
    own[p][free[rng.below(free.size())]] = 1;
    return true;
  };

  // Every person needs a few edges that can absorb filler images, and the
  // single-overlap person needs a widely shared object for their one match.
  for (std::size_t p = 0; p < P; ++p) {
    auto eligible = [&] {
      std::size_t n = 0;
      for (std::size_t c = 0; c < C; ++c) n += own[p][c] > 0 && filler_weight(classes[c].role) > 0;
      return n;
    };
    while (eligible() < 3 && add_wide(p)) {
    }
  }
  if (std::none_of(wide.begin(), wide.end(), [&](std::size_t c) { return own[single_overlap][c] > 0; })) {
    add_wide(single_overlap);
  }

  // Fill each person up to two labels per image.
  for (std::size_t p = 0; p < P; ++p) {
    std::size_t used = 0;
    for (std::size_t c = 0; c < C; ++c) used += own[p][c];
    const std::size_t budget = 2 * image_count[p];
    if (used > budget) throw std::logic_error("fixture: ownership plan exceeds label budget");
    for (std::size_t left = budget - used; left > 0; --left) {
      std::vector<std::size_t> pool;
      for (std::size_t c = 0; c < C; ++c) {
        if (own[p][c] == 0 || own[p][c] >= image_count[p]) continue;
        for (unsigned w = filler_weight(classes[c].role); w > 0; --w) pool.push_back(c);
      }
      if (pool.empty()) throw std::logic_error("fixture: no edge can absorb filler labels");
      ++own[p][pool[rng.below(pool.size())]];
    }
  }

  // Image ids interleave people.
  std::vector<std::size_t> owner_of_slot;
  for (std::size_t p = 0; p < P; ++p) owner_of_slot.insert(owner_of_slot.end(), image_count[p], p);
  rng.shuffle(owner_of_slot);

  DatasetParts parts;
  for (const auto& c : classes) parts.classes.push_back(c.name);
  parts.people = people;

  std::vector<std::vector<std::size_t>> images_of(P);
  for (std::size_t i = 0; i < owner_of_slot.size(); ++i) {
    const ImageSize size = kSizes[rng.below(kSizes.size())];
    ImageRecord img;
    img.id = numbered("img_", i + 1, 4);
    img.person = people[owner_of_slot[i]];
    img.width = size.w;
    img.height = size.h;
    parts.images.push_back(std::move(img));
    images_of[owner_of_slot[i]].push_back(i);
  }

  // Lay each person's label multiset out as a sequence grouped by class;
  // image k takes positions k and k + m. No class block is longer than m,
  // so the two labels of an image always differ.
  std::vector<std::vector<std::size_t>> labels(kImages);
  for (std::size_t p = 0; p < P; ++p) {
    std::vector<std::size_t> seq;
    for (std::size_t c = 0; c < C; ++c) seq.insert(seq.end(), own[p][c], c);
    auto slots = images_of[p];
    rng.shuffle(slots);
    const std::size_t m = slots.size();
    for (std::size_t k = 0; k < m; ++k) {
      labels[slots[k]] = {seq[k], seq[k + m]};
      std::sort(labels[slots[k]].begin(), labels[slots[k]].end());
    }
  }

  // Choose which truth pairs the detector finds.
  std::set<std::pair<std::size_t, std::size_t>> hits;
  {
    std::vector<std::size_t> anchor_classes;
    for (auto c : wide) {
      if (own[single_overlap][c] > 0) anchor_classes.push_back(c);
    }
    const std::size_t anchor = anchor_classes[rng.below(anchor_classes.size())];
    std::vector<std::size_t> anchor_images;
    for (auto i : images_of[single_overlap]) {
      if (std::find(labels[i].begin(), labels[i].end(), anchor) != labels[i].end()) anchor_images.push_back(i);
    }
    hits.insert({anchor_images[rng.below(anchor_images.size())], anchor});

    std::vector<std::pair<std::size_t, std::size_t>> pool;
    for (std::size_t i = 0; i < kImages; ++i) {
      if (owner_of_slot[i] == single_overlap) continue;
      for (auto c : labels[i]) {
        if (detected_role(classes[c].role)) pool.emplace_back(i, c);
      }
    }
    const std::size_t wanted = kTruthPairs - kMissedPairs - 1;
    if (pool.size() < wanted) throw std::logic_error("fixture: not enough detectable truth pairs");
    rng.shuffle(pool);
    hits.insert(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(wanted));
  }

  std::vector<std::size_t> detected_classes;
  for (std::size_t c = 0; c < C; ++c) {
    if (detected_role(classes[c].role)) detected_classes.push_back(c);
  }
  std::set<std::size_t> single_overlap_owned;
  for (std::size_t c = 0; c < C; ++c) {
    if (own[single_overlap][c] > 0) single_overlap_owned.insert(c);
  }
  // A false positive for image i must not name one of its labels, and for
  // the single-overlap person not any object they own at all.
  auto fp_candidates = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (auto c : detected_classes) {
      if (std::find(labels[i].begin(), labels[i].end(), c) != labels[i].end()) continue;
      if (owner_of_slot[i] == single_overlap && single_overlap_owned.contains(c)) continue;
      out.push_back(c);
    }
    return out;
  };

  struct PendingDetection {
    std::size_t cls;
    BBox box;
    double confidence;
  };
  std::vector<std::vector<PendingDetection>> dets(kImages);
  for (std::size_t i = 0; i < kImages; ++i) {
    const ImageRecord& img = parts.images[i];
    for (auto c : labels[i]) {
      if (!hits.contains({i, c})) continue;
      const BBox box = random_box(rng, img);
      dets[i].push_back({c, box, round3(rng.real(0.30, 0.99))});
      if (rng.chance(0.25)) dets[i].push_back({c, jittered_box(rng, img, box), round3(rng.real(0.10, 0.90))});
    }
    const double fp_rate = owner_of_slot[i] == single_overlap ? 0.6 : 0.35;
    if (rng.chance(fp_rate)) {
      const auto candidates = fp_candidates(i);
      const std::size_t c = candidates[rng.below(candidates.size())];
      const BBox box = !dets[i].empty() && rng.chance(0.3)
                           ? jittered_box(rng, img, dets[i][rng.below(dets[i].size())].box)
                           : random_box(rng, img);
      dets[i].push_back({c, box, round3(rng.real(0.05, 0.75))});
    }
  }

  // Every detectable class shows up at least once.
  for (auto c : detected_classes) {
    const bool seen = std::any_of(dets.begin(), dets.end(), [&](const auto& v) {
      return std::any_of(v.begin(), v.end(), [&](const PendingDetection& d) { return d.cls == c; });
    });
    if (seen) continue;
    std::vector<std::size_t> hosts;
    for (std::size_t i = 0; i < kImages; ++i) {
      if (owner_of_slot[i] != single_overlap &&
          std::find(labels[i].begin(), labels[i].end(), c) == labels[i].end()) {
        hosts.push_back(i);
      }
    }
    const std::size_t i = hosts[rng.below(hosts.size())];
    dets[i].push_back({c, random_box(rng, parts.images[i]), round3(rng.real(0.05, 0.5))});
  }

  std::size_t next_id = 1;
  for (std::size_t i = 0; i < kImages; ++i) {
    for (const auto& d : dets[i]) {
      Detection det;
      det.id = numbered("det_", next_id++, 5);
      det.image = parts.images[i].id;
      det.class_name = classes[d.cls].name;
      det.bbox = d.box;
      det.confidence = d.confidence;
      parts.detections.push_back(std::move(det));
    }
  }

  std::vector<GroundTruthEntry> truth;
  truth.reserve(kImages);
  for (std::size_t i = 0; i < kImages; ++i) {
    GroundTruthEntry entry{parts.images[i].id, {}};
    for (auto c : labels[i]) entry.labels.push_back(classes[c].name);
    truth.push_back(std::move(entry));
  }
  parts.ground_truth = std::move(truth);
  return parts;
}

}  // namespace vismca::fixture
