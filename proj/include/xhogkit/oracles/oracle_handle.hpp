#pragma once

// Black-box oracle handles. A strategy holding an OracleHandle can apply the
// oracle, its adjoint and its controlled form, each costing one query; it
// cannot see the state or function the oracle encodes. That hidden instance
// is reachable only through a VerifierKey, which scoring and test code obtain
// from verification::key().

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xhogkit/core/error.hpp"
#include "xhogkit/core/linalg.hpp"
#include "xhogkit/oracles/sign_function.hpp"

namespace xhogkit::oracles {

enum class OracleKind { canonical, random_prep, reflection, fourier_phase };

inline std::string_view kind_name(OracleKind k) {
  switch (k) {
    case OracleKind::canonical: return "canonical";
    case OracleKind::random_prep: return "random_prep";
    case OracleKind::reflection: return "reflection";
    case OracleKind::fourier_phase: return "fourier_phase";
  }
  return "?";
}

/// The secret an oracle encodes.
struct HiddenInstance {
  std::optional<PureState> psi;  // n-qubit state, no bot index
  std::optional<SignFunction> f;
};

class VerifierKey;

namespace verification {
/// Grants access to hidden instances. Only scoring and verification code
/// should call this; strategies never do.
VerifierKey key() noexcept;
}  // namespace verification

class VerifierKey {
  VerifierKey() = default;
  friend VerifierKey verification::key() noexcept;
};

inline VerifierKey verification::key() noexcept { return VerifierKey{}; }

class OracleHandle {
 public:
  /// I - 2 u u^dagger
  struct Reflector {
    Vector u;
  };
  struct Dense {
    Matrix m;
  };
  struct Diagonal {
    std::vector<std::int8_t> d;
  };
  using Action = std::variant<Reflector, Dense, Diagonal>;

  OracleHandle(OracleKind kind, std::string name, int qubits, Action action, HiddenInstance hidden)
      : kind_(kind), name_(std::move(name)), qubits_(qubits), action_(std::move(action)), hidden_(std::move(hidden)) {
    dim_ = std::visit([](const auto& a) -> Index {
      using A = std::decay_t<decltype(a)>;
      if constexpr (std::is_same_v<A, Reflector>) return a.u.size();
      else if constexpr (std::is_same_v<A, Dense>) return a.m.rows();
      else return static_cast<Index>(a.d.size());
    }, action_);
  }

  OracleKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  int qubits() const { return qubits_; }
  /// Dimension the oracle acts on (2^n, or 2^n + 1 with the bot index).
  Index dim() const { return dim_; }
  bool has_bot() const { return kind_ == OracleKind::canonical; }

  /// The input a strategy feeds the oracle to prepare its state: |bot> for the
  /// canonical oracle, |0^n> otherwise.
  Vector start_state() const { return linalg::basis_vector(dim_, has_bot() ? dim_ - 1 : 0); }

  Vector apply(const Vector& v) {
    check_dim(v, dim_);
    ++calls_;
    return act(v, false);
  }

  Vector apply_adjoint(const Vector& v) {
    check_dim(v, dim_);
    ++calls_;
    return act(v, true);
  }

  /// diag(I, O) on a 2*dim vector; the control is the most significant qubit.
  Vector apply_controlled(const Vector& v) {
    check_dim(v, 2 * dim_);
    ++calls_;
    Vector out = v;
    out.tail(dim_) = act(v.tail(dim_), false);
    return out;
  }

  std::int64_t queries() const { return calls_; }
  QueryLedger ledger() const { return calls_ == 0 ? QueryLedger{} : QueryLedger{{name_, calls_}}; }

  /// Dense matrix of the oracle, charged as one query.
  UnitaryOp unitary(VerifierKey) const {
    Matrix m(dim_, dim_);
    for (Index j = 0; j < dim_; ++j) m.col(j) = act(linalg::basis_vector(dim_, j), false);
    return UnitaryOp::trusted(std::move(m), {{name_, 1}});
  }

  const HiddenInstance& reveal(VerifierKey) const {
    ++reveals_;
    return hidden_;
  }

  /// How often reveal() has been called; lets a harness assert that nothing
  /// peeked at the instance before scoring.
  std::int64_t reveal_count() const { return reveals_; }

 private:
  static void check_dim(const Vector& v, Index want) {
    detail::require<DimensionMismatch>(v.size() == want, "OracleHandle: input has dimension " +
                                                             std::to_string(v.size()) + ", expected " +
                                                             std::to_string(want));
  }

  Vector act(const Vector& v, bool adjoint) const {
    return std::visit([&](const auto& a) -> Vector {
      using A = std::decay_t<decltype(a)>;
      if constexpr (std::is_same_v<A, Reflector>) {
        return v - 2.0 * a.u * a.u.dot(v);
      } else if constexpr (std::is_same_v<A, Dense>) {
        return adjoint ? Vector(a.m.adjoint() * v) : Vector(a.m * v);
      } else {
        Vector out = v;
        for (Index i = 0; i < out.size(); ++i)
          if (a.d[static_cast<std::size_t>(i)] < 0) out(i) = -out(i);
        return out;
      }
    }, action_);
  }

  OracleKind kind_;
  std::string name_;
  int qubits_;
  Index dim_ = 0;
  Action action_;
  HiddenInstance hidden_;
  std::int64_t calls_ = 0;
  mutable std::int64_t reveals_ = 0;
};

}  // namespace xhogkit::oracles
