#pragma once

#include <concepts>
#include <cstdint>
#include <string_view>

namespace mixsem {

// Scalars of the semantic category. Reals for the distributional backend,
// Booleans for relations.
template <class S>
concept Semiring = requires(typename S::value_type a, typename S::value_type b) {
  { S::zero() } -> std::same_as<typename S::value_type>;
  { S::one() } -> std::same_as<typename S::value_type>;
  { S::add(a, b) } -> std::same_as<typename S::value_type>;
  { S::mul(a, b) } -> std::same_as<typename S::value_type>;
  { S::conj(a) } -> std::same_as<typename S::value_type>;
  { S::name } -> std::convertible_to<std::string_view>;
};

struct RealField {
  using value_type = double;
  static constexpr std::string_view name = "real";

  static constexpr value_type zero() { return 0.0; }
  static constexpr value_type one() { return 1.0; }
  static constexpr value_type add(value_type a, value_type b) { return a + b; }
  static constexpr value_type mul(value_type a, value_type b) { return a * b; }
  static constexpr value_type sub(value_type a, value_type b) { return a - b; }
  static constexpr value_type conj(value_type a) { return a; }
};

// Stored as bytes so tensors never hit std::vector<bool>.
struct BooleanSemiring {
  using value_type = std::uint8_t;
  static constexpr std::string_view name = "boolean";

  static constexpr value_type zero() { return 0; }
  static constexpr value_type one() { return 1; }
  static constexpr value_type add(value_type a, value_type b) { return (a | b) ? 1 : 0; }
  static constexpr value_type mul(value_type a, value_type b) { return (a & b) ? 1 : 0; }
  static constexpr value_type conj(value_type a) { return a; }
};

static_assert(Semiring<RealField>);
static_assert(Semiring<BooleanSemiring>);

}  // namespace mixsem
