#include <doctest.h>

#include <atomic>
#include <vector>

#include "tvspec/parallel.hpp"

using namespace tvspec;

TEST_CASE("parallel_for visits every index exactly once") {
  const std::size_t saved = worker_count();
  for (std::size_t workers : {1u, 2u, 4u, 7u}) {
    set_worker_count(workers);
    CHECK(worker_count() == workers);
    std::vector<int> hits(1001, 0);
    parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) ++hits[i];
    });
    for (int h : hits) CHECK(h == 1);
    std::atomic<int> calls{0};
    parallel_for(0, [&](std::size_t, std::size_t) { ++calls; });
    CHECK(calls == 0);
  }
  set_worker_count(saved);
}
