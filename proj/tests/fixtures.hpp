#pragma once

#include "auginf/numerics/tensor.hpp"

namespace fixture {

// Two 10-node rings, each with two chords, joined by one bridge.
inline auginf::nn::Tensor2 toy_graph() {
  auginf::nn::Tensor2 a(20, 20);
  auto link = [&](std::size_t i, std::size_t j) { a(i, j) = a(j, i) = 1.0; };
  for (std::size_t c = 0; c < 2; ++c) {
    const std::size_t o = 10 * c;
    for (std::size_t i = 0; i < 10; ++i) link(o + i, o + (i + 1) % 10);
    link(o, o + 5);
    link(o + 2, o + 7);
  }
  link(4, 14);
  return a;
}

}  // namespace fixture
