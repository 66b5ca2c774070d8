#pragma once

// Message-passing process backend. Only compiled into targets that define
// PSDNS_WITH_MPI and link an MPI implementation; the in-process ThreadComm
// backend covers everything else.

#ifdef PSDNS_WITH_MPI

#include <mpi.h>

#include <memory>
#include <stdexcept>

#include "psdns/comm.hpp"

namespace psdns {

class MpiComm final : public Communicator {
 public:
  explicit MpiComm(MPI_Comm comm, bool owned = false) : comm_(comm), owned_(owned) {
    MPI_Comm_rank(comm_, &rank_);
    MPI_Comm_size(comm_, &size_);
  }

  ~MpiComm() override {
    if (owned_ && comm_ != MPI_COMM_NULL) MPI_Comm_free(&comm_);
  }

  MpiComm(const MpiComm&) = delete;
  MpiComm& operator=(const MpiComm&) = delete;

  int rank() const override { return rank_; }
  int size() const override { return size_; }

  std::unique_ptr<Communicator> split(int color) override {
    MPI_Comm sub = MPI_COMM_NULL;
    MPI_Comm_split(comm_, color, rank_, &sub);
    return std::make_unique<MpiComm>(sub, true);
  }

  void all_to_all(const void* send, void* recv, std::size_t block_bytes) override {
    MPI_Alltoall(const_cast<void*>(send), static_cast<int>(block_bytes), MPI_BYTE, recv,
                 static_cast<int>(block_bytes), MPI_BYTE, comm_);
  }

  double reduce_sum(double value) override {
    double out = 0.0;
    MPI_Reduce(&value, &out, 1, MPI_DOUBLE, MPI_SUM, 0, comm_);
    return rank_ == 0 ? out : 0.0;
  }

  double reduce_max(double value) override {
    double out = 0.0;
    MPI_Reduce(&value, &out, 1, MPI_DOUBLE, MPI_MAX, 0, comm_);
    return rank_ == 0 ? out : 0.0;
  }

  void broadcast(void* data, std::size_t bytes, int root) override {
    MPI_Bcast(data, static_cast<int>(bytes), MPI_BYTE, root, comm_);
  }

 private:
  MPI_Comm comm_;
  bool owned_;
  int rank_ = 0;
  int size_ = 1;
};

}  // namespace psdns

#endif  // PSDNS_WITH_MPI
