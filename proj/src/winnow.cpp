#include "coderev/winnow.hpp"

#include <algorithm>
#include <stdexcept>

namespace coderev {

namespace {

// 64-bit polynomial rolling hash over bytes, wraparound arithmetic.
constexpr std::uint64_t kBase = 0x100000001B3ULL;

std::vector<std::uint64_t> gram_hashes(std::string_view text, std::uint32_t k) {
  const std::size_t n = text.size();
  std::vector<std::uint64_t> hashes;
  hashes.reserve(n - k + 1);

  std::uint64_t power = 1;  // kBase^(k-1)
  for (std::uint32_t i = 0; i + 1 < k; ++i) power *= kBase;

  std::uint64_t h = 0;
  for (std::uint32_t i = 0; i < k; ++i)
    h = h * kBase + static_cast<unsigned char>(text[i]);
  hashes.push_back(h);
  for (std::size_t i = k; i < n; ++i) {
    h -= power * static_cast<unsigned char>(text[i - k]);
    h = h * kBase + static_cast<unsigned char>(text[i]);
    hashes.push_back(h);
  }
  return hashes;
}

}  // namespace

Fingerprint fingerprint(std::string_view code, std::uint32_t k, std::uint32_t w) {
  if (k == 0 || w == 0) throw std::invalid_argument("k and w must be positive");
  if (code.size() < k)
    throw std::invalid_argument("input below gram size (need at least " +
                                std::to_string(k) + " characters)");

  const std::vector<std::uint64_t> grams = gram_hashes(code, k);
  Fingerprint fp;
  fp.k = k;
  fp.w = w;

  const std::size_t window = std::min<std::size_t>(w, grams.size());
  std::size_t last_selected = grams.size();  // sentinel: nothing yet
  for (std::size_t end = window; end <= grams.size(); ++end) {
    const std::size_t begin = end - window;
    // Rightmost minimum in [begin, end): selection depends only on window
    // contents, which is what makes shared substrings produce shared picks.
    std::size_t best = begin;
    for (std::size_t i = begin + 1; i < end; ++i) {
      if (grams[i] <= grams[best]) best = i;
    }
    if (best != last_selected) {
      fp.hashes.emplace_back(grams[best], static_cast<std::uint32_t>(best));
      last_selected = best;
    }
  }
  return fp;
}

double match_score(const Fingerprint& a, const Fingerprint& b) {
  if (a.k != b.k || a.w != b.w)
    throw std::invalid_argument("fingerprints built with different (k, w)");

  std::vector<std::uint64_t> ha, hb;
  ha.reserve(a.hashes.size());
  hb.reserve(b.hashes.size());
  for (const auto& [h, pos] : a.hashes) ha.push_back(h);
  for (const auto& [h, pos] : b.hashes) hb.push_back(h);
  std::sort(ha.begin(), ha.end());
  ha.erase(std::unique(ha.begin(), ha.end()), ha.end());
  std::sort(hb.begin(), hb.end());
  hb.erase(std::unique(hb.begin(), hb.end()), hb.end());

  if (ha.empty()) return 0.0;
  std::size_t inter = 0;
  auto ia = ha.begin();
  auto ib = hb.begin();
  while (ia != ha.end() && ib != hb.end()) {
    if (*ia < *ib) ++ia;
    else if (*ib < *ia) ++ib;
    else { ++inter; ++ia; ++ib; }
  }
  return static_cast<double>(inter) / static_cast<double>(ha.size());
}

}  // namespace coderev
