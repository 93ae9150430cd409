#pragma once

#include <optional>
#include <vector>

namespace semcom {

/// Binary BS-to-user association Z(t), stored row-major (bs * num_users + user).
/// Every row and every column holds at most one 1.
class AssociationMatrix {
 public:
  AssociationMatrix() = default;
  AssociationMatrix(int num_bs, int num_users);

  int num_bs() const { return num_bs_; }
  int num_users() const { return num_users_; }

  bool linked(int bs, int user) const { return z_[index(bs, user)] != 0; }

  /// Sets z(bs,user)=1. Throws StateError if that would break one-to-one.
  void link(int bs, int user);
  void clear();

  std::optional<int> bs_of(int user) const;
  std::optional<int> user_of(int bs) const;
  bool bs_active(int bs) const { return user_of(bs).has_value(); }

  int row_sum(int bs) const;
  int col_sum(int user) const;
  /// True iff every row and column sum is at most one.
  bool feasible() const;

  const std::vector<unsigned char>& raw() const { return z_; }

 private:
  std::size_t index(int bs, int user) const {
    return static_cast<std::size_t>(bs) * num_users_ + user;
  }

  int num_bs_ = 0;
  int num_users_ = 0;
  std::vector<unsigned char> z_;
};

}  // namespace semcom
