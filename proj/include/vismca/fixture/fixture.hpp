#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

#include "vismca/core/model.hpp"

namespace vismca::fixture {

// Shape of the synthetic corpus. The generator builds the label and
// detection layout so the counts below hold exactly for every seed.
inline constexpr std::size_t kImages = 900;
inline constexpr std::size_t kPeople = 40;
inline constexpr std::size_t kClasses = 43;
inline constexpr std::size_t kDetectedClasses = 22;
inline constexpr std::size_t kTruthPairs = 1800;  // two labels per image
inline constexpr std::size_t kMissedPairs = 954;  // 53 % of the truth pairs

inline constexpr std::string_view kTotem = "canadaPencil";
/// Owned by exactly eight people; only the totem has >= 2 images per owner.
inline constexpr std::array<std::string_view, 4> kExactlyEight = {"canadaPencil", "noisemaker",
                                                                  "rainbowPens", "rubiksCube"};
/// Owned by more than eight people.
inline constexpr std::array<std::string_view, 5> kWidelyShared = {"blueSunglasses", "lavenderDie",
                                                                  "metalKey", "miniCards", "pinkEraser"};
/// Labeled for Person19..Person24 only and never detected.
inline constexpr std::string_view kMissedObject = "gClamp";
inline constexpr std::array<std::string_view, 6> kMissedObjectOwners = {
    "Person19", "Person20", "Person21", "Person22", "Person23", "Person24"};
/// Exactly one of this person's objects is both detected and labeled; every
/// other detection in their images is a false positive.
inline constexpr std::string_view kSingleOverlapPerson = "Person33";

/// Builds the corpus, including ground truth for seeding corrections.
DatasetParts generate(std::uint64_t seed = 0);

}  // namespace vismca::fixture
