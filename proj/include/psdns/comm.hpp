#pragma once

#include <barrier>
#include <cstddef>
#include <cstring>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <thread>
#include <vector>

namespace psdns {

/// Rank/size handle with the three collectives the transforms and diagnostics
/// need. All collectives are blocking rendezvous points: every member of the
/// group must call with identically sized buffers.
class Communicator {
 public:
  virtual ~Communicator() = default;

  virtual int rank() const = 0;
  virtual int size() const = 0;

  /// Subcommunicator of all ranks sharing this rank's color, ordered by
  /// parent rank.
  virtual std::unique_ptr<Communicator> split(int color) = 0;

  /// Equal-block exchange: receive block j equals send block i of rank j.
  virtual void all_to_all(const void* send, void* recv, std::size_t block_bytes) = 0;

  /// Rank-ascending sum, valid on rank 0; other ranks receive 0.
  virtual double reduce_sum(double value) = 0;

  /// Global max, valid on rank 0; other ranks receive 0.
  virtual double reduce_max(double value) = 0;

  virtual void broadcast(void* data, std::size_t bytes, int root) = 0;

  template <class T>
  void all_to_all_t(const T* send, T* recv, std::size_t count_per_block) {
    all_to_all(send, recv, count_per_block * sizeof(T));
  }
};

namespace detail {

/// Shared state for one in-process communicator group: R logical ranks on R
/// threads with a barrier at every collective.
struct ThreadGroupState {
  explicit ThreadGroupState(int n)
      : size(n), barrier(n), slots(n, nullptr), colors(n, 0), values(n, 0.0) {}

  int size;
  std::barrier<> barrier;
  std::vector<const void*> slots;
  std::vector<int> colors;
  std::vector<double> values;
  std::map<int, std::shared_ptr<ThreadGroupState>> children;
};

}  // namespace detail

/// In-process backend: multi-rank runs without a launcher. Reduction order is
/// fixed (rank ascending) so results are reproducible.
class ThreadComm final : public Communicator {
 public:
  ThreadComm(std::shared_ptr<detail::ThreadGroupState> state, int rank)
      : state_(std::move(state)), rank_(rank) {}

  int rank() const override { return rank_; }
  int size() const override { return state_->size; }

  std::unique_ptr<Communicator> split(int color) override {
    auto& s = *state_;
    s.colors[rank_] = color;
    s.barrier.arrive_and_wait();
    if (rank_ == 0) {
      s.children.clear();
      std::map<int, int> counts;
      for (int r = 0; r < s.size; ++r) ++counts[s.colors[r]];
      for (auto& [c, n] : counts)
        s.children[c] = std::make_shared<detail::ThreadGroupState>(n);
    }
    s.barrier.arrive_and_wait();
    auto child = s.children.at(color);
    int sub_rank = 0;
    for (int r = 0; r < rank_; ++r)
      if (s.colors[r] == color) ++sub_rank;
    s.barrier.arrive_and_wait();
    return std::make_unique<ThreadComm>(std::move(child), sub_rank);
  }

  void all_to_all(const void* send, void* recv, std::size_t block_bytes) override {
    auto& s = *state_;
    s.slots[rank_] = send;
    s.barrier.arrive_and_wait();
    auto* out = static_cast<unsigned char*>(recv);
    for (int j = 0; j < s.size; ++j) {
      const auto* in = static_cast<const unsigned char*>(s.slots[j]);
      std::memcpy(out + static_cast<std::size_t>(j) * block_bytes,
                  in + static_cast<std::size_t>(rank_) * block_bytes, block_bytes);
    }
    s.barrier.arrive_and_wait();
  }

  double reduce_sum(double value) override {
    auto& s = *state_;
    s.values[rank_] = value;
    s.barrier.arrive_and_wait();
    double result = 0.0;
    if (rank_ == 0)
      for (int r = 0; r < s.size; ++r) result += s.values[r];
    s.barrier.arrive_and_wait();
    return result;
  }

  double reduce_max(double value) override {
    auto& s = *state_;
    s.values[rank_] = value;
    s.barrier.arrive_and_wait();
    double result = 0.0;
    if (rank_ == 0) {
      result = s.values[0];
      for (int r = 1; r < s.size; ++r)
        if (s.values[r] > result) result = s.values[r];
    }
    s.barrier.arrive_and_wait();
    return result;
  }

  void broadcast(void* data, std::size_t bytes, int root) override {
    auto& s = *state_;
    if (rank_ == root) s.slots[root] = data;
    s.barrier.arrive_and_wait();
    if (rank_ != root) std::memcpy(data, s.slots[root], bytes);
    s.barrier.arrive_and_wait();
  }

 private:
  std::shared_ptr<detail::ThreadGroupState> state_;
  int rank_;
};

/// Run fn(comm) on `ranks` logical ranks, one thread each. Rethrows the
/// lowest-rank exception after all threads join.
inline void run_on_ranks(int ranks, const std::function<void(Communicator&)>& fn) {
  if (ranks <= 0) throw std::invalid_argument("run_on_ranks: ranks must be positive");
  auto state = std::make_shared<detail::ThreadGroupState>(ranks);
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(ranks);
  threads.reserve(ranks);
  for (int r = 0; r < ranks; ++r) {
    threads.emplace_back([&, r] {
      ThreadComm comm(state, r);
      try {
        fn(comm);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace psdns
