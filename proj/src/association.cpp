#include "semcom/association.hpp"

#include <algorithm>

#include "semcom/common.hpp"

namespace semcom {

AssociationMatrix::AssociationMatrix(int num_bs, int num_users)
    : num_bs_(num_bs),
      num_users_(num_users),
      z_(static_cast<std::size_t>(num_bs) * num_users, 0) {}

void AssociationMatrix::link(int bs, int user) {
  if (bs_active(bs) || bs_of(user).has_value()) {
    throw StateError("association would violate the one-to-one constraint");
  }
  z_[index(bs, user)] = 1;
}

void AssociationMatrix::clear() { std::fill(z_.begin(), z_.end(), 0); }

std::optional<int> AssociationMatrix::bs_of(int user) const {
  for (int m = 0; m < num_bs_; ++m) {
    if (linked(m, user)) return m;
  }
  return std::nullopt;
}

std::optional<int> AssociationMatrix::user_of(int bs) const {
  for (int n = 0; n < num_users_; ++n) {
    if (linked(bs, n)) return n;
  }
  return std::nullopt;
}

int AssociationMatrix::row_sum(int bs) const {
  int s = 0;
  for (int n = 0; n < num_users_; ++n) s += z_[index(bs, n)];
  return s;
}

int AssociationMatrix::col_sum(int user) const {
  int s = 0;
  for (int m = 0; m < num_bs_; ++m) s += z_[index(m, user)];
  return s;
}

bool AssociationMatrix::feasible() const {
  for (int m = 0; m < num_bs_; ++m) {
    if (row_sum(m) > 1) return false;
  }
  for (int n = 0; n < num_users_; ++n) {
    if (col_sum(n) > 1) return false;
  }
  return true;
}

}  // namespace semcom
