#pragma once

#include "field.hpp"
#include "grid.hpp"

namespace ssflow {
namespace detail {

inline Field dx1_field(const Field& f, const Grid& g) {
  Field r(g);
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j) r(i, j) = ddx1(f, g, i, j);
  return r;
}
inline Field dx2_field(const Field& f, const Grid& g) {
  Field r(g);
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j) r(i, j) = ddx2(f, g, i, j);
  return r;
}
inline Field dx1x1_field(const Field& f, const Grid& g) {
  Field r(g);
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j) r(i, j) = d2dx1(f, g, i, j);
  return r;
}
inline Field dx2x2_field(const Field& f, const Grid& g) {
  Field r(g);
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j) r(i, j) = d2dx2(f, g, i, j);
  return r;
}
inline Field dx1x2_field(const Field& f, const Grid& g) {
  Field r(g);
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j) r(i, j) = ddx1x2(f, g, i, j);
  return r;
}
inline Field axpy(const Field& a, double s, const Field& b) {
  Field r = a;
  for (std::size_t k = 0; k < r.v.size(); ++k) r.v[k] += s * b.v[k];
  return r;
}

}  // namespace detail
}  // namespace ssflow
