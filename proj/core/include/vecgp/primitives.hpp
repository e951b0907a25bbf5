#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "vecgp/value.hpp"

namespace vecgp {

// The fifteen primitives programs are built from. Six binary and seven unary
// functions plus the two vector terminals: the classified sample (Input) and
// a captured training vector acting as a constant (Ephemeral).
enum class PrimitiveKind : std::uint8_t {
    Add,
    Sub,
    Mul,
    Div,       // protected: a component divides to 1 when |denominator| < 0.001
    Max,
    Min,
    Abs,
    SatLin,    // clamp to [-1, 1]
    Sum,
    Mean,
    VecMax,
    VecMin,
    Norm,      // Euclidean norm; |x| on scalars
    Ephemeral,
    Input,
};

inline constexpr int kPrimitiveKindCount = 15;

int arity(PrimitiveKind kind);
std::string_view primitive_name(PrimitiveKind kind);
std::optional<PrimitiveKind> primitive_from_name(std::string_view name);

std::span<const PrimitiveKind> all_kinds();
std::span<const PrimitiveKind> function_kinds();  // arity 1 and 2
std::span<const PrimitiveKind> binary_kinds();
std::span<const PrimitiveKind> unary_kinds();
std::span<const PrimitiveKind> terminal_kinds();
std::span<const PrimitiveKind> kinds_with_arity(int arity);

// Scalar kernels shared by Value-level application and the tree evaluator.
namespace kernels {

inline constexpr double kDivGuard = 0.001;

inline double add(double a, double b) { return a + b; }
inline double sub(double a, double b) { return a - b; }
inline double mul(double a, double b) { return a * b; }
inline double div(double num, double den) {
    return std::fabs(den) < kDivGuard ? 1.0 : num / den;
}
inline double max2(double a, double b) { return a < b ? b : a; }
inline double min2(double a, double b) { return b < a ? b : a; }
inline double abs1(double x) { return std::fabs(x); }
inline double satlin(double x) { return x > 1.0 ? 1.0 : (x < -1.0 ? -1.0 : x); }

double (*binary_fn(PrimitiveKind kind))(double, double);

} // namespace kernels

// Componentwise application with scalar broadcasting: the result is a scalar
// iff both arguments are scalars, otherwise a vector of the feature count.
Value broadcast_binary(double (*fn)(double, double), const Value& a, const Value& b);

// Semantics of one function primitive over already-evaluated arguments.
// Terminals are resolved by tree evaluation, not here.
Value apply_primitive(PrimitiveKind kind, std::span<const Value> args);

} // namespace vecgp
