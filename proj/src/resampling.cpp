#include "hybefs/resampling.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "hybefs/error.hpp"

namespace hybefs {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_stream(std::uint64_t master_seed, std::span<const std::uint64_t> tags) {
  std::uint64_t h = splitmix64(master_seed ^ 0x6A09E667F3BCC909ULL);
  for (std::uint64_t tag : tags) {
    h = splitmix64(h ^ splitmix64(tag + 0xA0761D6478BD642FULL));
  }
  return splitmix64(h + tags.size());
}

std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  // Lemire's nearly divisionless method.
  unsigned __int128 product = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

std::vector<std::size_t> FoldAssignment::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldAssignment::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] != fold) out.push_back(i);
  }
  return out;
}

FoldAssignment stratified_folds(std::span<const Label> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) fail(ErrorKind::config, "fold count must be at least 2");
  FoldAssignment out{std::vector<std::size_t>(labels.size(), 0), k};
  for (Label c : {Label{0}, Label{1}}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) members.push_back(i);
    }
    if (members.size() < k) {
      fail(ErrorKind::data, "class " + std::to_string(c) + " has " + std::to_string(members.size()) +
                                " samples, fewer than the " + std::to_string(k) + " folds requested");
    }
    Rng rng(derive_stream(seed, {c}));
    for (std::size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[uniform_index(rng, i)]);
    }
    for (std::size_t pos = 0; pos < members.size(); ++pos) out.fold_of[members[pos]] = pos % k;
  }
  return out;
}

SampleIndexSet downsample_balance(std::span<const std::size_t> train,
                                  std::span<const Label> labels, std::uint64_t seed) {
  std::array<std::vector<std::size_t>, 2> by_class;
  for (auto i : train) by_class[labels[i]].push_back(i);
  if (by_class[0].empty() || by_class[1].empty()) {
    fail(ErrorKind::data, "downsampling needs both classes in the training set");
  }
  const std::size_t keep = std::min(by_class[0].size(), by_class[1].size());
  auto& majority = by_class[0].size() > keep ? by_class[0] : by_class[1];
  if (majority.size() > keep) {
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
    keyed.reserve(majority.size());
    for (auto i : majority) keyed.emplace_back(derive_stream(seed, {i}), i);
    std::nth_element(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(keep), keyed.end());
    majority.clear();
    for (std::size_t j = 0; j < keep; ++j) majority.push_back(keyed[j].second);
  }
  SampleIndexSet out;
  out.reserve(2 * keep);
  out.insert(out.end(), by_class[0].begin(), by_class[0].end());
  out.insert(out.end(), by_class[1].begin(), by_class[1].end());
  std::sort(out.begin(), out.end());
  return out;
}

SampleIndexSet bootstrap(std::span<const std::size_t> train, std::span<const Label> labels,
                         std::uint64_t seed) {
  if (train.empty()) fail(ErrorKind::data, "cannot bootstrap an empty sample set");
  bool input_has_both = false;
  for (auto i : train) {
    if (labels[i] != labels[train[0]]) {
      input_has_both = true;
      break;
    }
  }
  SampleIndexSet bag(train.size());
  for (int attempt = 0; attempt <= kBootstrapMaxRetries; ++attempt) {
    Rng rng(attempt == 0 ? seed : derive_stream(seed, {static_cast<std::uint64_t>(attempt)}));
    bool seen[2] = {false, false};
    for (auto& slot : bag) {
      slot = train[uniform_index(rng, train.size())];
      seen[labels[slot]] = true;
    }
    if (!input_has_both || (seen[0] && seen[1])) return bag;
  }
  fail(ErrorKind::runtime, "bootstrap drew a single-class bag " +
                               std::to_string(kBootstrapMaxRetries + 1) + " times in a row");
}

}  // namespace hybefs
