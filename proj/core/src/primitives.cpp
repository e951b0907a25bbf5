#include "vecgp/primitives.hpp"

#include <array>
#include <cassert>

namespace vecgp {

namespace {

constexpr std::array<PrimitiveKind, 15> kAll = {
    PrimitiveKind::Add,    PrimitiveKind::Sub,    PrimitiveKind::Mul,
    PrimitiveKind::Div,    PrimitiveKind::Max,    PrimitiveKind::Min,
    PrimitiveKind::Abs,    PrimitiveKind::SatLin, PrimitiveKind::Sum,
    PrimitiveKind::Mean,   PrimitiveKind::VecMax, PrimitiveKind::VecMin,
    PrimitiveKind::Norm,   PrimitiveKind::Ephemeral, PrimitiveKind::Input,
};

constexpr std::array<PrimitiveKind, 6> kBinary = {
    PrimitiveKind::Add, PrimitiveKind::Sub, PrimitiveKind::Mul,
    PrimitiveKind::Div, PrimitiveKind::Max, PrimitiveKind::Min,
};

constexpr std::array<PrimitiveKind, 7> kUnary = {
    PrimitiveKind::Abs,    PrimitiveKind::SatLin, PrimitiveKind::Sum,
    PrimitiveKind::Mean,   PrimitiveKind::VecMax, PrimitiveKind::VecMin,
    PrimitiveKind::Norm,
};

constexpr std::array<PrimitiveKind, 13> kFunctions = {
    PrimitiveKind::Add,    PrimitiveKind::Sub,    PrimitiveKind::Mul,
    PrimitiveKind::Div,    PrimitiveKind::Max,    PrimitiveKind::Min,
    PrimitiveKind::Abs,    PrimitiveKind::SatLin, PrimitiveKind::Sum,
    PrimitiveKind::Mean,   PrimitiveKind::VecMax, PrimitiveKind::VecMin,
    PrimitiveKind::Norm,
};

constexpr std::array<PrimitiveKind, 2> kTerminals = {
    PrimitiveKind::Ephemeral, PrimitiveKind::Input,
};

} // namespace

int arity(PrimitiveKind kind) {
    switch (kind) {
        case PrimitiveKind::Add:
        case PrimitiveKind::Sub:
        case PrimitiveKind::Mul:
        case PrimitiveKind::Div:
        case PrimitiveKind::Max:
        case PrimitiveKind::Min:
            return 2;
        case PrimitiveKind::Abs:
        case PrimitiveKind::SatLin:
        case PrimitiveKind::Sum:
        case PrimitiveKind::Mean:
        case PrimitiveKind::VecMax:
        case PrimitiveKind::VecMin:
        case PrimitiveKind::Norm:
            return 1;
        case PrimitiveKind::Ephemeral:
        case PrimitiveKind::Input:
            return 0;
    }
    return 0;
}

std::string_view primitive_name(PrimitiveKind kind) {
    switch (kind) {
        case PrimitiveKind::Add: return "ADD";
        case PrimitiveKind::Sub: return "SUB";
        case PrimitiveKind::Mul: return "MUL";
        case PrimitiveKind::Div: return "DIV";
        case PrimitiveKind::Max: return "MXF";
        case PrimitiveKind::Min: return "MNF";
        case PrimitiveKind::Abs: return "ABS";
        case PrimitiveKind::SatLin: return "SLN";
        case PrimitiveKind::Sum: return "SUM";
        case PrimitiveKind::Mean: return "MEA";
        case PrimitiveKind::VecMax: return "MXV";
        case PrimitiveKind::VecMin: return "MIV";
        case PrimitiveKind::Norm: return "L2";
        case PrimitiveKind::Ephemeral: return "E";
        case PrimitiveKind::Input: return "X";
    }
    return "?";
}

std::optional<PrimitiveKind> primitive_from_name(std::string_view name) {
    for (PrimitiveKind kind : kAll) {
        if (primitive_name(kind) == name) return kind;
    }
    return std::nullopt;
}

std::span<const PrimitiveKind> all_kinds() { return kAll; }
std::span<const PrimitiveKind> function_kinds() { return kFunctions; }
std::span<const PrimitiveKind> binary_kinds() { return kBinary; }
std::span<const PrimitiveKind> unary_kinds() { return kUnary; }
std::span<const PrimitiveKind> terminal_kinds() { return kTerminals; }

std::span<const PrimitiveKind> kinds_with_arity(int a) {
    switch (a) {
        case 0: return kTerminals;
        case 1: return kUnary;
        case 2: return kBinary;
        default: return {};
    }
}

namespace kernels {

double (*binary_fn(PrimitiveKind kind))(double, double) {
    switch (kind) {
        case PrimitiveKind::Add: return add;
        case PrimitiveKind::Sub: return sub;
        case PrimitiveKind::Mul: return mul;
        case PrimitiveKind::Div: return div;
        case PrimitiveKind::Max: return max2;
        case PrimitiveKind::Min: return min2;
        default: return nullptr;
    }
}

} // namespace kernels

Value broadcast_binary(double (*fn)(double, double), const Value& a, const Value& b) {
    if (a.is_scalar() && b.is_scalar()) {
        return Value::scalar(fn(a.scalar_value(), b.scalar_value()));
    }
    if (a.is_scalar()) {
        std::vector<double> out(b.components().begin(), b.components().end());
        for (double& c : out) c = fn(a.scalar_value(), c);
        return Value::vector(std::move(out));
    }
    if (b.is_scalar()) {
        std::vector<double> out(a.components().begin(), a.components().end());
        for (double& c : out) c = fn(c, b.scalar_value());
        return Value::vector(std::move(out));
    }
    assert(a.components().size() == b.components().size());
    std::vector<double> out(a.components().size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = fn(a.components()[i], b.components()[i]);
    }
    return Value::vector(std::move(out));
}

namespace {

Value map_componentwise(double (*fn)(double), const Value& v) {
    if (v.is_scalar()) return Value::scalar(fn(v.scalar_value()));
    std::vector<double> out(v.components().begin(), v.components().end());
    for (double& c : out) c = fn(c);
    return Value::vector(std::move(out));
}

double reduce_vector(PrimitiveKind kind, std::span<const double> xs) {
    switch (kind) {
        case PrimitiveKind::Sum: {
            double s = 0.0;
            for (double x : xs) s += x;
            return s;
        }
        case PrimitiveKind::Mean: {
            double s = 0.0;
            for (double x : xs) s += x;
            return s / static_cast<double>(xs.size());
        }
        case PrimitiveKind::VecMax: {
            double m = xs[0];
            for (double x : xs) m = kernels::max2(m, x);
            return m;
        }
        case PrimitiveKind::VecMin: {
            double m = xs[0];
            for (double x : xs) m = kernels::min2(m, x);
            return m;
        }
        case PrimitiveKind::Norm: {
            double s = 0.0;
            for (double x : xs) s += x * x;
            return std::sqrt(s);
        }
        default:
            assert(false);
            return 0.0;
    }
}

} // namespace

Value apply_primitive(PrimitiveKind kind, std::span<const Value> args) {
    assert(static_cast<int>(args.size()) == arity(kind));
    switch (kind) {
        case PrimitiveKind::Add:
        case PrimitiveKind::Sub:
        case PrimitiveKind::Mul:
        case PrimitiveKind::Div:
        case PrimitiveKind::Max:
        case PrimitiveKind::Min:
            return broadcast_binary(kernels::binary_fn(kind), args[0], args[1]);
        case PrimitiveKind::Abs:
            return map_componentwise(kernels::abs1, args[0]);
        case PrimitiveKind::SatLin:
            return map_componentwise(kernels::satlin, args[0]);
        case PrimitiveKind::Sum:
        case PrimitiveKind::Mean:
        case PrimitiveKind::VecMax:
        case PrimitiveKind::VecMin:
            // Identity on scalars; vectors reduce to a scalar.
            if (args[0].is_scalar()) return args[0];
            return Value::scalar(reduce_vector(kind, args[0].components()));
        case PrimitiveKind::Norm:
            if (args[0].is_scalar()) return Value::scalar(std::fabs(args[0].scalar_value()));
            return Value::scalar(reduce_vector(kind, args[0].components()));
        case PrimitiveKind::Ephemeral:
        case PrimitiveKind::Input:
            assert(false && "terminals are resolved during tree evaluation");
            return Value::scalar(0.0);
    }
    return Value::scalar(0.0);
}

} // namespace vecgp
