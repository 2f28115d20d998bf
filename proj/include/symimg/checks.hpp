#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace symimg {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::size_t cases = 0;
  std::string detail;
};

/// Seeded property corpus: SCC and mean-cycle oracles, flow axioms,
/// decomposition, projection, extreme points, enclosure and modulus
/// soundness, and trajectory encodings.
std::vector<CheckResult> run_property_corpus(std::uint64_t seed);

}  // namespace symimg
