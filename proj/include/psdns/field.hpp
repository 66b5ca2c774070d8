#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "psdns/layout.hpp"

namespace psdns {

/// Local block of a global 3D scalar field, row-major in the local extents.
template <class T>
struct Field3 {
  Layout layout;
  std::vector<T> data;

  Field3() = default;
  explicit Field3(const Layout& l) : layout(l), data(l.local_size()) {}

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * layout.local[1] + j) * layout.local[2] + k;
  }
  T& operator()(std::size_t i, std::size_t j, std::size_t k) { return data[index(i, j, k)]; }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data[index(i, j, k)];
  }

  void fill(const T& v) { data.assign(data.size(), v); }
};

template <class Real>
using RealField = Field3<Real>;

template <class Real>
using SpectralField = Field3<std::complex<Real>>;

/// Three component fields sharing one layout.
template <class T>
struct VecField3 {
  std::array<Field3<T>, 3> c;

  VecField3() = default;
  explicit VecField3(const Layout& l) : c{Field3<T>(l), Field3<T>(l), Field3<T>(l)} {}

  Field3<T>& operator[](std::size_t i) { return c[i]; }
  const Field3<T>& operator[](std::size_t i) const { return c[i]; }
  const Layout& layout() const { return c[0].layout; }
};

template <class Real>
using RealVecField = VecField3<Real>;

template <class Real>
using SpectralVecField = VecField3<std::complex<Real>>;

}  // namespace psdns
