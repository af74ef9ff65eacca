#include "nsad/cost.hpp"

#include <cmath>

#include "nsad/errors.hpp"

namespace nsad {

namespace {

int ceil_log2(int k) {
    int bits = 0;
    int v = 1;
    while (v < k) {
        v <<= 1;
        ++bits;
    }
    return bits;
}

} // namespace

CostScheme CostScheme::unit() { return CostScheme(true, 1, 1); }

CostScheme CostScheme::weighted(Rat c_nonlin, Rat c_relu) {
    if (c_nonlin < 1) throw UnpricedOpError("weighted scheme needs c_nonlin >= 1");
    if (c_relu < 0) throw UnpricedOpError("weighted scheme needs c_relu >= 0");
    return CostScheme(false, std::move(c_nonlin), std::move(c_relu));
}

std::string CostScheme::op_key(const Op& op) {
    return op.name() + "/" + std::to_string(op.arity);
}

std::optional<Rat> CostScheme::base_cost(const Op& op) const {
    const int k = op.arity;
    switch (op.kind) {
        case OpKind::Add:
        case OpKind::Sub:
        case OpKind::Mul:
        case OpKind::AddConst:
        case OpKind::MulConst:
            return Rat(1);
        case OpKind::Inv:
        case OpKind::Exp:
        case OpKind::Log:
            return unit_ ? Rat(1) : c_nonlin_;
        case OpKind::Relu:
            // Assumption of unit cost for the ReLU dictionary; the weighted
            // scheme charges the sign branch separately.
            return unit_ ? Rat(1) : Rat(1) + c_relu_;
        case OpKind::Abs:
        case OpKind::LeakyRelu:
            return Rat(1) + c_relu_;
        case OpKind::Elu:
            return Rat(2) + c_relu_ + c_nonlin_;
        case OpKind::MaxK:
        case OpKind::MinK:
            return Rat(k - 1) * c_relu_;
        case OpKind::MedianK:
            return Rat(k) * Rat(ceil_log2(k)) * c_relu_;
        case OpKind::Norm1:
            return Rat(k) * (Rat(2) + c_relu_) - 1;
        case OpKind::NormInf:
            return Rat(k) + Rat(2 * k) * c_relu_ - 1;
        case OpKind::Custom:
            return std::nullopt;
    }
    return std::nullopt;
}

std::optional<Rat> CostScheme::base_cost_gd(const Op& op) const {
    switch (op.kind) {
        case OpKind::Add:
        case OpKind::Sub:
        case OpKind::Mul:
        case OpKind::AddConst:
        case OpKind::MulConst:
            return Rat(1);
        case OpKind::Exp:
            return unit_ ? Rat(1) : c_nonlin_;
        case OpKind::Log:
            return unit_ ? Rat(2) : Rat(2) * c_nonlin_;
        case OpKind::Inv:
            return unit_ ? Rat(3) : c_nonlin_ + 2;
        case OpKind::Relu:
            return unit_ ? Rat(1) : Rat(1) + c_relu_;
        // The remaining selections reuse the sign information of the forward
        // pass, so the joint program costs the same as the plain one.
        case OpKind::Abs:
        case OpKind::LeakyRelu:
        case OpKind::Elu:
        case OpKind::MaxK:
        case OpKind::MinK:
        case OpKind::MedianK:
        case OpKind::Norm1:
        case OpKind::NormInf:
            return base_cost(op);
        case OpKind::Custom:
            return std::nullopt;
    }
    return std::nullopt;
}

Rat CostScheme::cost(const Op& op) const {
    if (auto it = override_cost_.find(op_key(op)); it != override_cost_.end())
        return it->second;
    if (auto c = base_cost(op)) return *c;
    throw UnpricedOpError("no cost entry for op " + op.name());
}

Rat CostScheme::cost_gd(const Op& op) const {
    if (auto it = override_gd_.find(op_key(op)); it != override_gd_.end())
        return it->second;
    if (auto c = base_cost_gd(op)) return *c;
    throw UnpricedOpError("no derived cost entry for op " + op.name());
}

void CostScheme::set_cost(const Op& op, Rat value) {
    if (value < 0) throw UnpricedOpError("costs must be nonnegative");
    override_cost_[op_key(op)] = std::move(value);
}

void CostScheme::set_cost_gd(const Op& op, Rat value) {
    if (value < 0) throw UnpricedOpError("costs must be nonnegative");
    override_gd_[op_key(op)] = std::move(value);
}

std::string CostScheme::describe() const {
    if (unit_) return "unit";
    return "weighted:c_nonlin=" + rat_to_string(c_nonlin_) +
           ",c_relu=" + rat_to_string(c_relu_);
}

Rat program_cost(const Program& program, const CostScheme& scheme) {
    Rat total = 0;
    for (const auto& n : program.nodes) {
        if (n.is_sub())
            total += program_cost(*n.sub, scheme);
        else
            total += scheme.cost(n.op);
    }
    return total;
}

} // namespace nsad
