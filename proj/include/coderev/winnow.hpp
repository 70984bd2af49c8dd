#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace coderev {

// Winnowing fingerprint: the selected (hash, position) pairs over the k-gram
// rolling hashes of the input, one pick per window of w consecutive grams
// (rightmost minimum on ties, recorded once per distinct selection). Any two
// inputs sharing a substring of length >= w + k - 1 share at least one hash.
struct Fingerprint {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> hashes;
  std::uint32_t k = 5;
  std::uint32_t w = 4;
};

// Fingerprints normalized code text (grams are characters). Throws when the
// input is shorter than k. Inputs with fewer than w grams use a single
// window spanning all grams.
Fingerprint fingerprint(std::string_view code, std::uint32_t k = 5,
                        std::uint32_t w = 4);

// Containment of a in b: |hash set of a ∩ hash set of b| / |hash set of a|.
// Throws when the (k, w) parameters differ.
double match_score(const Fingerprint& a, const Fingerprint& b);

}  // namespace coderev
