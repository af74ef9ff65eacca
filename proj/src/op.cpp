#include "nsad/op.hpp"

#include <map>

#include "nsad/errors.hpp"

namespace nsad {

namespace {

const std::map<OpKind, std::string> kOpNames = {
    {OpKind::Add, "add"},           {OpKind::Sub, "sub"},
    {OpKind::Mul, "mul"},           {OpKind::AddConst, "add-const"},
    {OpKind::MulConst, "mul-const"},{OpKind::Inv, "inv"},
    {OpKind::Exp, "exp"},           {OpKind::Log, "log"},
    {OpKind::Relu, "relu"},         {OpKind::Abs, "abs"},
    {OpKind::LeakyRelu, "leaky-relu"}, {OpKind::Elu, "elu"},
    {OpKind::MaxK, "max-k"},        {OpKind::MinK, "min-k"},
    {OpKind::MedianK, "median-k"},  {OpKind::Norm1, "norm1"},
    {OpKind::NormInf, "norm-inf"},
};

} // namespace

std::string Op::name() const {
    if (kind == OpKind::Custom) return custom_name;
    return kOpNames.at(kind);
}

void Op::validate() const {
    switch (kind) {
        case OpKind::Add:
        case OpKind::Sub:
        case OpKind::Mul:
            if (arity != 2) throw ArityError(name() + " takes 2 arguments");
            break;
        case OpKind::AddConst:
        case OpKind::MulConst:
        case OpKind::Inv:
        case OpKind::Exp:
        case OpKind::Log:
        case OpKind::Relu:
        case OpKind::Abs:
        case OpKind::LeakyRelu:
        case OpKind::Elu:
            if (arity != 1) throw ArityError(name() + " takes 1 argument");
            break;
        case OpKind::MaxK:
        case OpKind::MinK:
        case OpKind::MedianK:
        case OpKind::Norm1:
        case OpKind::NormInf:
            if (arity < 2) throw ArityError(name() + " needs k >= 2 arguments");
            break;
        case OpKind::Custom:
            if (arity < 1) throw ArityError("custom op needs at least 1 argument");
            if (custom_name.empty() || is_builtin_op_name(custom_name))
                throw ArityError("custom op needs a distinct nonempty name");
            break;
    }
}

OpKind op_kind_from_name(const std::string& name) {
    for (const auto& [kind, n] : kOpNames)
        if (n == name) return kind;
    return OpKind::Custom;
}

bool is_builtin_op_name(const std::string& name) {
    for (const auto& [kind, n] : kOpNames)
        if (n == name) return true;
    return false;
}

bool in_relu_dictionary(const Op& op) {
    switch (op.kind) {
        case OpKind::Add:
        case OpKind::Mul:
        case OpKind::AddConst:
        case OpKind::MulConst:
        case OpKind::Inv:
        case OpKind::Exp:
        case OpKind::Log:
        case OpKind::Relu:
            return true;
        default:
            return false;
    }
}

bool in_d0_dictionary(const Op& op) {
    return op.kind == OpKind::Add || op.kind == OpKind::Sub || op.kind == OpKind::Relu;
}

bool exact_mode_supported(const Op& op) {
    switch (op.kind) {
        case OpKind::Exp:
        case OpKind::Log:
        case OpKind::Elu:
        case OpKind::Custom:
            return false;
        default:
            return true;
    }
}

} // namespace nsad
