#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace vpoem {

/// Worker count used when the caller asks for "all cores".
inline unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Pulls items from `source` in batches, maps each batch over `jobs` threads
/// and hands results to `sink` in input order. At most
/// jobs * batch_per_worker items are held in memory at once. An exception
/// thrown by `fn` stops the run and is rethrown on the calling thread.
template <class In, class Fn, class Sink>
void ordered_parallel_map(const std::function<std::optional<In>()>& source, Fn&& fn, Sink&& sink,
                          unsigned jobs, std::size_t batch_per_worker = 256) {
  using Out = std::invoke_result_t<Fn&, In&&>;
  jobs = std::max(1u, jobs);
  const std::size_t capacity = jobs * std::max<std::size_t>(1, batch_per_worker);
  std::vector<In> batch;
  std::vector<std::optional<Out>> results;
  bool exhausted = false;
  while (!exhausted) {
    batch.clear();
    while (batch.size() < capacity) {
      auto item = source();
      if (!item) {
        exhausted = true;
        break;
      }
      batch.push_back(std::move(*item));
    }
    if (batch.empty()) break;
    results.clear();
    results.resize(batch.size());

    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, batch.size()));
    if (workers <= 1) {
      for (std::size_t i = 0; i < batch.size(); ++i) results[i].emplace(fn(std::move(batch[i])));
    } else {
      std::vector<std::exception_ptr> errors(workers);
      {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
          pool.emplace_back([&, w] {
            try {
              for (std::size_t i = w; i < batch.size(); i += workers) {
                results[i].emplace(fn(std::move(batch[i])));
              }
            } catch (...) {
              errors[w] = std::current_exception();
            }
          });
        }
      }
      for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    for (auto& r : results) sink(std::move(*r));
  }
}

/// In-memory convenience over ordered_parallel_map.
template <class In, class Fn>
auto parallel_map(std::vector<In> items, Fn&& fn, unsigned jobs) {
  using Out = std::invoke_result_t<Fn&, In&&>;
  std::vector<Out> out;
  out.reserve(items.size());
  std::size_t next = 0;
  const std::function<std::optional<In>()> source = [&]() -> std::optional<In> {
    if (next == items.size()) return std::nullopt;
    return std::move(items[next++]);
  };
  ordered_parallel_map<In>(source, fn, [&](Out&& o) { out.push_back(std::move(o)); }, jobs);
  return out;
}

}  // namespace vpoem
