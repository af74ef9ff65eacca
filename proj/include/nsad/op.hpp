#pragma once

#include <string>

#include "nsad/rational.hpp"

namespace nsad {

enum class OpKind {
    Add,
    Sub,
    Mul,
    AddConst,
    MulConst,
    Inv,
    Exp,
    Log,
    Relu,
    Abs,
    LeakyRelu,
    Elu,
    MaxK,
    MinK,
    MedianK,
    Norm1,
    NormInf,
    Custom,
};

// A dictionary operation. Constants and slope parameters ride along as exact
// rationals; floating evaluation derives from them.
struct Op {
    OpKind kind = OpKind::Add;
    int arity = 2;
    Rat payload = 0;          // AddConst / MulConst constant, LeakyRelu / Elu slope
    std::string custom_name;  // Custom only

    static Op add() { return {OpKind::Add, 2, 0, {}}; }
    static Op sub() { return {OpKind::Sub, 2, 0, {}}; }
    static Op mul() { return {OpKind::Mul, 2, 0, {}}; }
    static Op add_const(Rat c) { return {OpKind::AddConst, 1, std::move(c), {}}; }
    static Op mul_const(Rat c) { return {OpKind::MulConst, 1, std::move(c), {}}; }
    static Op inv() { return {OpKind::Inv, 1, 0, {}}; }
    static Op exp() { return {OpKind::Exp, 1, 0, {}}; }
    static Op log() { return {OpKind::Log, 1, 0, {}}; }
    static Op relu() { return {OpKind::Relu, 1, 0, {}}; }
    static Op abs() { return {OpKind::Abs, 1, 0, {}}; }
    static Op leaky_relu(Rat slope) { return {OpKind::LeakyRelu, 1, std::move(slope), {}}; }
    static Op elu(Rat scale) { return {OpKind::Elu, 1, std::move(scale), {}}; }
    static Op max_k(int k) { return {OpKind::MaxK, k, 0, {}}; }
    static Op min_k(int k) { return {OpKind::MinK, k, 0, {}}; }
    static Op median_k(int k) { return {OpKind::MedianK, k, 0, {}}; }
    static Op norm1(int k) { return {OpKind::Norm1, k, 0, {}}; }
    static Op norm_inf(int k) { return {OpKind::NormInf, k, 0, {}}; }
    static Op custom(std::string name, int arity) {
        return {OpKind::Custom, arity, 0, std::move(name)};
    }

    bool has_payload() const {
        return kind == OpKind::AddConst || kind == OpKind::MulConst ||
               kind == OpKind::LeakyRelu || kind == OpKind::Elu;
    }
    bool variadic() const {
        return kind == OpKind::MaxK || kind == OpKind::MinK || kind == OpKind::MedianK ||
               kind == OpKind::Norm1 || kind == OpKind::NormInf || kind == OpKind::Custom;
    }

    // Wire name ("add", "mul-const", "max-k", ...). Custom ops use their own name.
    std::string name() const;

    // Throws ArityError when arity does not match the kind.
    void validate() const;
};

// Inverse of Op::name() modulo arity/payload, which come from the node context.
OpKind op_kind_from_name(const std::string& name);
bool is_builtin_op_name(const std::string& name);

// Membership in the paper-facing dictionaries.
bool in_relu_dictionary(const Op& op);                // {+, x, +c, xc, inv, exp, log, relu}
bool in_d0_dictionary(const Op& op);                  // {+, -, relu}
bool exact_mode_supported(const Op& op);              // evaluable in exact rationals

} // namespace nsad
