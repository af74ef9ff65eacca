#include "nsad/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nsad/errors.hpp"

namespace nsad {

void SelectionPolicy::validate() const {
    if (relu_at_zero < 0 || relu_at_zero > 1)
        throw std::invalid_argument("relu_at_zero must lie in [0,1]");
    if (abs_at_zero < -1 || abs_at_zero > 1)
        throw std::invalid_argument("abs_at_zero must lie in [-1,1]");
}

void OpCounter::charge_adds(long long n) { weighted += Rat(n) * scheme->cost(Op::add()); }
void OpCounter::charge_muls(long long n) { weighted += Rat(n) * scheme->cost(Op::mul()); }

namespace {

template <class T>
struct Scalar;

template <>
struct Scalar<double> {
    static constexpr bool exact = false;
    static double from_rat(const Rat& r) { return rat_to_double(r); }
    static double exp(double x) { return std::exp(x); }
    static double log(double x) { return std::log(x); }
};

template <>
struct Scalar<Rat> {
    static constexpr bool exact = true;
    static Rat from_rat(const Rat& r) { return r; }
    [[noreturn]] static Rat exp(const Rat&) {
        throw ExactModeError("exp has no exact rational evaluation");
    }
    [[noreturn]] static Rat log(const Rat&) {
        throw ExactModeError("log has no exact rational evaluation");
    }
};

template <class T>
int lowest_max_index(const std::vector<T>& args) {
    int best = 0;
    for (size_t i = 1; i < args.size(); ++i)
        if (args[i] > args[best]) best = static_cast<int>(i);
    return best;
}

template <class T>
int lowest_min_index(const std::vector<T>& args) {
    int best = 0;
    for (size_t i = 1; i < args.size(); ++i)
        if (args[i] < args[best]) best = static_cast<int>(i);
    return best;
}

// Upper median: value at sorted position floor(k/2); the derivative goes to
// the lowest input index holding that value.
template <class T>
int median_index(const std::vector<T>& args) {
    std::vector<int> order(args.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return args[a] < args[b]; });
    const T& med = args[order[args.size() / 2]];
    for (size_t i = 0; i < args.size(); ++i)
        if (args[i] == med) return static_cast<int>(i);
    return order[args.size() / 2];
}

template <class T>
T sign_select(const T& x, const T& at_zero) {
    if (x > 0) return T(1);
    if (x < 0) return T(-1);
    return at_zero;
}

template <class T>
T op_value(const Op& op, const std::vector<T>& args, int node, const OpRegistry* registry);

template <class T>
std::vector<T> op_selection(const Op& op, const std::vector<T>& args,
                            const SelectionPolicy& policy, int node,
                            const OpRegistry* registry, const T& value);

template <class T>
T op_value(const Op& op, const std::vector<T>& args, int node, const OpRegistry* registry) {
    using S = Scalar<T>;
    switch (op.kind) {
        case OpKind::Add: return args[0] + args[1];
        case OpKind::Sub: return args[0] - args[1];
        case OpKind::Mul: return args[0] * args[1];
        case OpKind::AddConst: return args[0] + S::from_rat(op.payload);
        case OpKind::MulConst: return args[0] * S::from_rat(op.payload);
        case OpKind::Inv:
            if (args[0] == T(0)) throw DomainError(node, "inv of zero");
            return T(1) / args[0];
        case OpKind::Exp: return S::exp(args[0]);
        case OpKind::Log:
            if (!(args[0] > T(0))) throw DomainError(node, "log of nonpositive value");
            return S::log(args[0]);
        case OpKind::Relu: return args[0] > T(0) ? args[0] : T(0);
        case OpKind::Abs: return args[0] < T(0) ? T(-args[0]) : args[0];
        case OpKind::LeakyRelu:
            return args[0] > T(0) ? args[0] : T(S::from_rat(op.payload) * args[0]);
        case OpKind::Elu: {
            if (args[0] >= T(0)) return args[0];
            T e = S::exp(args[0]);
            return S::from_rat(op.payload) * (e - T(1));
        }
        case OpKind::MaxK: return args[lowest_max_index(args)];
        case OpKind::MinK: return args[lowest_min_index(args)];
        case OpKind::MedianK: return args[median_index(args)];
        case OpKind::Norm1: {
            T acc(0);
            for (const T& a : args) acc += (a < T(0) ? T(-a) : a);
            return acc;
        }
        case OpKind::NormInf: {
            T best(0);
            for (const T& a : args) {
                T m = a < T(0) ? T(-a) : a;
                if (m > best) best = m;
            }
            return best;
        }
        case OpKind::Custom: {
            if constexpr (S::exact) {
                throw ExactModeError("custom ops are not available in exact mode");
            } else {
                if (!registry)
                    throw NoSelectionError("custom op '" + op.custom_name +
                                           "' has no registry");
                auto it = registry->find(op.custom_name);
                if (it == registry->end() || !it->second.value)
                    throw NoSelectionError("custom op '" + op.custom_name +
                                           "' is not registered");
                return it->second.value(std::span<const double>(args));
            }
        }
    }
    throw NoSelectionError("unreachable op kind");
}

template <class T>
std::vector<T> op_selection(const Op& op, const std::vector<T>& args,
                            const SelectionPolicy& policy, int node,
                            const OpRegistry* registry, const T& value) {
    using S = Scalar<T>;
    switch (op.kind) {
        case OpKind::Add: return {T(1), T(1)};
        case OpKind::Sub: return {T(1), T(-1)};
        case OpKind::Mul: return {args[1], args[0]};
        case OpKind::AddConst: return {T(1)};
        case OpKind::MulConst: return {S::from_rat(op.payload)};
        case OpKind::Inv: {
            if (args[0] == T(0)) throw DomainError(node, "inv of zero");
            return {T(-1) / (args[0] * args[0])};
        }
        case OpKind::Exp: return {value};
        case OpKind::Log:
            if (!(args[0] > T(0))) throw DomainError(node, "log of nonpositive value");
            return {T(1) / args[0]};
        case OpKind::Relu:
            if (args[0] > T(0)) return {T(1)};
            if (args[0] < T(0)) return {T(0)};
            return {S::from_rat(policy.relu_at_zero)};
        case OpKind::Abs:
            return {sign_select(args[0], T(S::from_rat(policy.abs_at_zero)))};
        case OpKind::LeakyRelu:
            return {args[0] > T(0) ? T(1) : S::from_rat(op.payload)};
        case OpKind::Elu: {
            if (args[0] >= T(0)) return {T(1)};
            return {S::from_rat(op.payload) * S::exp(args[0])};
        }
        case OpKind::MaxK: {
            std::vector<T> w(args.size(), T(0));
            w[lowest_max_index(args)] = T(1);
            return w;
        }
        case OpKind::MinK: {
            std::vector<T> w(args.size(), T(0));
            w[lowest_min_index(args)] = T(1);
            return w;
        }
        case OpKind::MedianK: {
            std::vector<T> w(args.size(), T(0));
            w[median_index(args)] = T(1);
            return w;
        }
        case OpKind::Norm1: {
            std::vector<T> w(args.size());
            for (size_t i = 0; i < args.size(); ++i)
                w[i] = sign_select(args[i], T(S::from_rat(policy.abs_at_zero)));
            return w;
        }
        case OpKind::NormInf: {
            std::vector<T> w(args.size(), T(0));
            int best = 0;
            T bestmag(0);
            for (size_t i = 0; i < args.size(); ++i) {
                T m = args[i] < T(0) ? T(-args[i]) : args[i];
                if (m > bestmag) {
                    bestmag = m;
                    best = static_cast<int>(i);
                }
            }
            w[best] = sign_select(args[best], T(S::from_rat(policy.abs_at_zero)));
            return w;
        }
        case OpKind::Custom: {
            if constexpr (S::exact) {
                throw ExactModeError("custom ops are not available in exact mode");
            } else {
                if (!registry)
                    throw NoSelectionError("custom op '" + op.custom_name +
                                           "' has no registry");
                auto it = registry->find(op.custom_name);
                if (it == registry->end() || !it->second.deriv)
                    throw NoSelectionError("custom op '" + op.custom_name +
                                           "' has no selection derivative");
                auto w = it->second.deriv(std::span<const double>(args));
                if (w.size() != args.size())
                    throw NoSelectionError("custom op '" + op.custom_name +
                                           "' returned a selection of wrong arity");
                return w;
            }
        }
    }
    throw NoSelectionError("unreachable op kind");
}

template <class T>
const OpRegistry* pick_registry(const OpRegistry* registry) {
    if constexpr (Scalar<T>::exact)
        return nullptr;
    else
        return registry;
}

template <class T>
GradResult<T> backprop_impl(const Program& program, const Trace<T>& trace,
                            OpCounter* counter);

template <class T>
Trace<T> trace_impl(const Program& program, const std::vector<T>& input,
                    const SelectionPolicy& policy, const OpRegistry* registry,
                    OpCounter* counter) {
    policy.validate();
    if (static_cast<int>(input.size()) != program.inputs)
        throw DimensionError("input length does not match program inputs");
    Trace<T> tr;
    tr.values.resize(program.memory());
    tr.derivs.resize(program.nodes.size());
    for (int j = 0; j < program.inputs; ++j) tr.values[j] = input[j];
    for (size_t idx = 0; idx < program.nodes.size(); ++idx) {
        const ProgramNode& n = program.nodes[idx];
        const int i = program.node_index(static_cast<int>(idx));
        std::vector<T> args;
        args.reserve(n.pred.size());
        for (int j : n.pred) args.push_back(tr.values[j - 1]);
        if (n.is_sub()) {
            // gd of a nested node is the chained joint evaluation: run the
            // subprogram's own backward differentiation.
            Trace<T> sub_tr = trace_impl(*n.sub, args, policy, registry, counter);
            GradResult<T> g = backprop_impl(*n.sub, sub_tr, counter);
            tr.values[i - 1] = g.value;
            tr.derivs[idx] = std::move(g.grad);
        } else {
            T v = op_value(n.op, args, i, registry);
            tr.derivs[idx] = op_selection(n.op, args, policy, i, registry, v);
            tr.values[i - 1] = std::move(v);
            if (counter) counter->charge_gd(n.op);
        }
    }
    return tr;
}

template <class T>
std::vector<T> evaluate_impl(const Program& program, const std::vector<T>& input,
                             const OpRegistry* registry, OpCounter* counter) {
    if (static_cast<int>(input.size()) != program.inputs)
        throw DimensionError("input length does not match program inputs");
    std::vector<T> x(program.memory());
    for (int j = 0; j < program.inputs; ++j) x[j] = input[j];
    for (size_t idx = 0; idx < program.nodes.size(); ++idx) {
        const ProgramNode& n = program.nodes[idx];
        const int i = program.node_index(static_cast<int>(idx));
        std::vector<T> args;
        args.reserve(n.pred.size());
        for (int j : n.pred) args.push_back(x[j - 1]);
        if (n.is_sub()) {
            x[i - 1] = evaluate_impl(*n.sub, args, registry, counter)[0];
        } else {
            x[i - 1] = op_value(n.op, args, i, registry);
            if (counter) counter->charge_op(n.op);
        }
    }
    std::vector<T> out(x.end() - program.outputs, x.end());
    return out;
}

template <class T>
GradResult<T> backprop_impl(const Program& program, const Trace<T>& trace,
                            OpCounter* counter) {
    if (program.outputs != 1)
        throw MultiOutputError("backprop requires a single-output program");
    const int m = program.memory();
    std::vector<T> v(m, T(0));
    v[m - 1] = T(1);
    for (int idx = static_cast<int>(program.nodes.size()) - 1; idx >= 0; --idx) {
        const ProgramNode& n = program.nodes[static_cast<size_t>(idx)];
        const int t = program.node_index(idx);
        const auto& w = trace.derivs[static_cast<size_t>(idx)];
        for (size_t k = 0; k < n.pred.size(); ++k) {
            v[n.pred[k] - 1] += v[t - 1] * w[k];
        }
        if (counter) {
            counter->charge_adds(static_cast<long long>(n.pred.size()));
            counter->charge_muls(static_cast<long long>(n.pred.size()));
        }
    }
    GradResult<T> res;
    res.value = trace.values[m - 1];
    res.grad.assign(v.begin(), v.begin() + program.inputs);
    return res;
}

template <class T>
GradResult<T> forprop_impl(const Program& program, const Trace<T>& trace,
                           const std::vector<std::vector<T>>& seed, OpCounter* counter) {
    if (program.outputs != 1)
        throw MultiOutputError("forprop requires a single-output program");
    const int p = program.inputs;
    size_t width = static_cast<size_t>(p);
    std::vector<std::vector<T>> tangent(program.memory());
    if (seed.empty()) {
        for (int j = 0; j < p; ++j) {
            tangent[j].assign(width, T(0));
            tangent[j][static_cast<size_t>(j)] = T(1);
        }
    } else {
        if (static_cast<int>(seed.size()) != p)
            throw DimensionError("seed must provide one tangent row per input");
        width = seed[0].size();
        for (int j = 0; j < p; ++j) {
            if (seed[static_cast<size_t>(j)].size() != width)
                throw DimensionError("ragged seed matrix");
            tangent[j] = seed[static_cast<size_t>(j)];
        }
    }
    for (size_t idx = 0; idx < program.nodes.size(); ++idx) {
        const ProgramNode& n = program.nodes[idx];
        const int i = program.node_index(static_cast<int>(idx));
        const auto& w = trace.derivs[idx];
        std::vector<T> acc(width, T(0));
        for (size_t k = 0; k < n.pred.size(); ++k) {
            const auto& src = tangent[static_cast<size_t>(n.pred[k] - 1)];
            for (size_t c = 0; c < width; ++c) acc[c] += w[k] * src[c];
        }
        if (counter) {
            counter->charge_muls(static_cast<long long>(n.pred.size() * width));
            counter->charge_adds(
                static_cast<long long>((n.pred.size() - 1) * width));
        }
        tangent[static_cast<size_t>(i - 1)] = std::move(acc);
    }
    GradResult<T> res;
    res.value = trace.values[static_cast<size_t>(program.memory() - 1)];
    res.grad = tangent[static_cast<size_t>(program.memory() - 1)];
    return res;
}

} // namespace

// --- double entry points -----------------------------------------------------

std::vector<double> evaluate(const Program& program, std::span<const double> input,
                             const OpRegistry* registry, OpCounter* counter) {
    return evaluate_impl<double>(program, {input.begin(), input.end()}, registry, counter);
}

Trace<double> evaluate_with_derivatives(const Program& program,
                                        std::span<const double> input,
                                        const SelectionPolicy& policy,
                                        const OpRegistry* registry, OpCounter* counter) {
    return trace_impl<double>(program, {input.begin(), input.end()}, policy, registry,
                              counter);
}

GradResult<double> backprop_from_trace(const Program& program, const Trace<double>& trace,
                                       OpCounter* counter) {
    return backprop_impl<double>(program, trace, counter);
}

GradResult<double> backprop(const Program& program, std::span<const double> input,
                            const SelectionPolicy& policy, const OpRegistry* registry,
                            OpCounter* counter) {
    auto tr = evaluate_with_derivatives(program, input, policy, registry, counter);
    return backprop_impl<double>(program, tr, counter);
}

GradResult<double> forprop_from_trace(const Program& program, const Trace<double>& trace,
                                      const std::vector<std::vector<double>>& seed,
                                      OpCounter* counter) {
    return forprop_impl<double>(program, trace, seed, counter);
}

GradResult<double> forprop(const Program& program, std::span<const double> input,
                           const SelectionPolicy& policy,
                           const std::vector<std::vector<double>>& seed,
                           const OpRegistry* registry, OpCounter* counter) {
    auto tr = evaluate_with_derivatives(program, input, policy, registry, counter);
    return forprop_impl<double>(program, tr, seed, counter);
}

std::vector<double> directional_derivatives(const Program& program,
                                            std::span<const double> input,
                                            const std::vector<std::vector<double>>& directions,
                                            const SelectionPolicy& policy,
                                            const OpRegistry* registry) {
    const size_t k = directions.size();
    std::vector<std::vector<double>> seed(static_cast<size_t>(program.inputs),
                                          std::vector<double>(k, 0.0));
    for (size_t c = 0; c < k; ++c) {
        if (static_cast<int>(directions[c].size()) != program.inputs)
            throw DimensionError("direction length does not match program inputs");
        for (int j = 0; j < program.inputs; ++j)
            seed[static_cast<size_t>(j)][c] = directions[c][static_cast<size_t>(j)];
    }
    auto res = forprop(program, input, policy, seed, registry);
    return res.grad;
}

// --- exact rational entry points ----------------------------------------------

std::vector<Rat> evaluate(const Program& program, const std::vector<Rat>& input,
                          OpCounter* counter) {
    return evaluate_impl<Rat>(program, input, nullptr, counter);
}

Trace<Rat> evaluate_with_derivatives(const Program& program, const std::vector<Rat>& input,
                                     const SelectionPolicy& policy, OpCounter* counter) {
    return trace_impl<Rat>(program, input, policy, nullptr, counter);
}

GradResult<Rat> backprop_from_trace(const Program& program, const Trace<Rat>& trace,
                                    OpCounter* counter) {
    return backprop_impl<Rat>(program, trace, counter);
}

GradResult<Rat> backprop(const Program& program, const std::vector<Rat>& input,
                         const SelectionPolicy& policy, OpCounter* counter) {
    auto tr = evaluate_with_derivatives(program, input, policy, counter);
    return backprop_impl<Rat>(program, tr, counter);
}

GradResult<Rat> forprop_from_trace(const Program& program, const Trace<Rat>& trace,
                                   const std::vector<std::vector<Rat>>& seed,
                                   OpCounter* counter) {
    return forprop_impl<Rat>(program, trace, seed, counter);
}

GradResult<Rat> forprop(const Program& program, const std::vector<Rat>& input,
                        const SelectionPolicy& policy,
                        const std::vector<std::vector<Rat>>& seed, OpCounter* counter) {
    auto tr = evaluate_with_derivatives(program, input, policy, counter);
    return forprop_impl<Rat>(program, tr, seed, counter);
}

std::vector<Rat> directional_derivatives(const Program& program, const std::vector<Rat>& input,
                                         const std::vector<std::vector<Rat>>& directions,
                                         const SelectionPolicy& policy) {
    const size_t k = directions.size();
    std::vector<std::vector<Rat>> seed(static_cast<size_t>(program.inputs),
                                       std::vector<Rat>(k, Rat(0)));
    for (size_t c = 0; c < k; ++c) {
        if (static_cast<int>(directions[c].size()) != program.inputs)
            throw DimensionError("direction length does not match program inputs");
        for (int j = 0; j < program.inputs; ++j)
            seed[static_cast<size_t>(j)][c] = directions[c][static_cast<size_t>(j)];
    }
    auto res = forprop(program, input, policy, seed);
    return res.grad;
}

} // namespace nsad
