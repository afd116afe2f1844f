#include "mdplab/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mdplab {

namespace {

void check_distribution_row(std::span<const double> row, const std::string& what) {
    double total = 0.0;
    for (double v : row) {
        if (!std::isfinite(v) || v < 0.0)
            throw ValidationError(what + ": negative or non-finite probability");
        total += v;
    }
    if (std::abs(total - 1.0) > kProbTol)
        throw ValidationError(what + ": row sums to " + std::to_string(total) +
                              ", expected 1 within 1e-12");
}

} // namespace

Mdp Mdp::zeros(int n_states, int n_actions) {
    if (n_states < 1 || n_actions < 1)
        throw std::invalid_argument("Mdp: n_states and n_actions must be positive");
    Mdp mdp;
    mdp.n_states = n_states;
    mdp.n_actions = n_actions;
    mdp.transition.assign(static_cast<size_t>(n_states) * n_actions * n_states, 0.0);
    mdp.reward = Matrix(n_states, n_actions);
    mdp.initial_dist.assign(n_states, 0.0);
    return mdp;
}

void Mdp::validate() const {
    if (n_states < 1 || n_actions < 1)
        throw ValidationError("Mdp: n_states and n_actions must be positive");
    if (transition.size() != static_cast<size_t>(n_states) * n_actions * n_states)
        throw ValidationError("Mdp: transition tensor has wrong size");
    if (reward.rows() != n_states || reward.cols() != n_actions)
        throw ValidationError("Mdp: reward table has wrong shape");
    if (static_cast<int>(initial_dist.size()) != n_states)
        throw ValidationError("Mdp: initial distribution has wrong length");

    for (int x = 0; x < n_states; ++x)
        for (int a = 0; a < n_actions; ++a)
            check_distribution_row(transition_row(x, a), "Mdp transition row (state " +
                                                             std::to_string(x) + ", action " +
                                                             std::to_string(a) + ")");
    for (int x = 0; x < n_states; ++x)
        for (int a = 0; a < n_actions; ++a)
            if (!std::isfinite(reward(x, a)))
                throw ValidationError("Mdp: non-finite reward at state " + std::to_string(x) +
                                      ", action " + std::to_string(a));
    check_distribution_row(initial_dist, "Mdp initial distribution");
}

Policy Policy::uniform(int n_states, int n_actions) {
    Policy pi;
    pi.probs = Matrix(n_states, n_actions, 1.0 / n_actions);
    return pi;
}

Policy Policy::deterministic(const std::vector<int>& action_per_state, int n_actions) {
    Policy pi;
    pi.probs = Matrix(static_cast<int>(action_per_state.size()), n_actions);
    for (size_t x = 0; x < action_per_state.size(); ++x) {
        const int a = action_per_state[x];
        if (a < 0 || a >= n_actions)
            throw std::invalid_argument("Policy::deterministic: action index out of range");
        pi.probs(static_cast<int>(x), a) = 1.0;
    }
    return pi;
}

void Policy::validate() const {
    for (int x = 0; x < probs.rows(); ++x)
        check_distribution_row(probs.row(x),
                               "Policy row (state " + std::to_string(x) + ")");
}

void Policy::validate_for(const Mdp& mdp) const {
    if (probs.rows() != mdp.n_states || probs.cols() != mdp.n_actions)
        throw ValidationError("Policy shape does not match the MDP");
    validate();
}

Policy mix(const Policy& a, const Policy& b, double alpha) {
    if (a.probs.rows() != b.probs.rows() || a.probs.cols() != b.probs.cols())
        throw std::invalid_argument("mix: policy shapes differ");
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("mix: alpha outside [0,1]");
    Policy out;
    out.probs = Matrix(a.probs.rows(), a.probs.cols());
    for (int x = 0; x < a.probs.rows(); ++x)
        for (int j = 0; j < a.probs.cols(); ++j)
            out.probs(x, j) = (1.0 - alpha) * a.probs(x, j) + alpha * b.probs(x, j);
    return out;
}

InducedChain induce_chain(const Mdp& mdp, const Policy& policy) {
    mdp.validate();
    policy.validate_for(mdp);

    InducedChain chain;
    chain.transition = Matrix(mdp.n_states, mdp.n_states);
    chain.reward.assign(mdp.n_states, 0.0);
    for (int x = 0; x < mdp.n_states; ++x) {
        for (int a = 0; a < mdp.n_actions; ++a) {
            const double w = policy.probs(x, a);
            if (w == 0.0) continue;
            chain.reward[x] += w * mdp.reward(x, a);
            const auto row = mdp.transition_row(x, a);
            for (int y = 0; y < mdp.n_states; ++y) chain.transition(x, y) += w * row[y];
        }
    }
    return chain;
}

// ---------------------------------------------------------------------------
// Graph diagnostics
// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<int>> positive_adjacency(const Matrix& p) {
    std::vector<std::vector<int>> adj(p.rows());
    for (int i = 0; i < p.rows(); ++i)
        for (int j = 0; j < p.cols(); ++j)
            if (p(i, j) > 0.0) adj[i].push_back(j);
    return adj;
}

// Tarjan strongly connected components, iterative.
std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> index(n, -1), lowlink(n, 0), on_stack(n, 0);
    std::vector<int> stack;
    std::vector<std::vector<int>> components;
    int next_index = 0;

    struct Frame {
        int v;
        size_t edge;
    };
    std::vector<Frame> call_stack;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call_stack.push_back({root, 0});
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;

        while (!call_stack.empty()) {
            Frame& frame = call_stack.back();
            const int v = frame.v;
            if (frame.edge < adj[v].size()) {
                const int w = adj[v][frame.edge++];
                if (index[w] == -1) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call_stack.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
            } else {
                call_stack.pop_back();
                if (!call_stack.empty())
                    lowlink[call_stack.back().v] = std::min(lowlink[call_stack.back().v],
                                                            lowlink[v]);
                if (lowlink[v] == index[v]) {
                    std::vector<int> comp;
                    while (true) {
                        const int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp.push_back(w);
                        if (w == v) break;
                    }
                    std::sort(comp.begin(), comp.end());
                    components.push_back(std::move(comp));
                }
            }
        }
    }
    return components;
}

// Period of a strongly connected component: gcd over its edges of
// level(u) + 1 - level(v), with BFS levels from an arbitrary root.
int component_period(const std::vector<std::vector<int>>& adj, const std::vector<int>& comp) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> in_comp(n, 0), level(n, -1);
    for (int v : comp) in_comp[v] = 1;

    std::vector<int> queue{comp.front()};
    level[comp.front()] = 0;
    int gcd = 0;
    for (size_t head = 0; head < queue.size(); ++head) {
        const int u = queue[head];
        for (int w : adj[u]) {
            if (!in_comp[w]) continue;
            if (level[w] == -1) {
                level[w] = level[u] + 1;
                queue.push_back(w);
            } else {
                gcd = std::gcd(gcd, std::abs(level[u] + 1 - level[w]));
            }
        }
    }
    return gcd == 0 ? 1 : gcd;
}

} // namespace

std::vector<int> reachable_states(const Matrix& p, const Vector& mu) {
    const int n = p.rows();
    std::vector<int> seen(n, 0), queue;
    for (int x = 0; x < n; ++x)
        if (mu[x] > 0.0 && !seen[x]) {
            seen[x] = 1;
            queue.push_back(x);
        }
    for (size_t head = 0; head < queue.size(); ++head) {
        const int u = queue[head];
        for (int y = 0; y < n; ++y)
            if (p(u, y) > 0.0 && !seen[y]) {
                seen[y] = 1;
                queue.push_back(y);
            }
    }
    std::vector<int> out;
    for (int x = 0; x < n; ++x)
        if (seen[x]) out.push_back(x);
    return out;
}

ReachabilityReport chain_reachability(const Matrix& p, const Vector& mu) {
    ReachabilityReport report;
    report.reachable = reachable_states(p, mu);

    const auto adj = positive_adjacency(p);
    const auto all_components = strongly_connected_components(adj);
    report.irreducible = all_components.size() == 1;

    std::vector<int> reachable_mask(p.rows(), 0);
    for (int x : report.reachable) reachable_mask[x] = 1;

    // a class is recurrent if it is closed: no edge leaves it
    for (const auto& comp : all_components) {
        if (!reachable_mask[comp.front()]) continue;
        std::vector<int> in_comp(p.rows(), 0);
        for (int v : comp) in_comp[v] = 1;
        bool closed = true;
        for (int v : comp) {
            for (int w : adj[v])
                if (!in_comp[w]) {
                    closed = false;
                    break;
                }
            if (!closed) break;
        }
        if (closed) report.recurrent_classes.push_back(comp);
    }

    report.unichain = report.recurrent_classes.size() == 1;
    if (report.unichain) {
        report.period = component_period(adj, report.recurrent_classes.front());
        report.aperiodic = report.period == 1;
    }
    return report;
}

ReachabilityReport validate_reachability(const Mdp& mdp, const Policy& policy) {
    const InducedChain chain = induce_chain(mdp, policy);
    return chain_reachability(chain.transition, mdp.initial_dist);
}

// ---------------------------------------------------------------------------
// Garnet generator
// ---------------------------------------------------------------------------

Vector DeterministicRng::simplex(int n) {
    Vector w(n);
    double total = 0.0;
    for (double& v : w) {
        v = exponential();
        total += v;
    }
    for (double& v : w) v /= total;
    return w;
}

Mdp garnet(int n_states, int n_actions, int branching, double reward_sparsity,
           std::uint64_t seed) {
    if (n_states < 1 || n_actions < 1)
        throw std::invalid_argument("garnet: n_states and n_actions must be positive");
    if (branching < 1 || branching > n_states)
        throw std::invalid_argument("garnet: branching must be in [1, n_states]");
    if (reward_sparsity < 0.0 || reward_sparsity > 1.0)
        throw std::invalid_argument("garnet: reward_sparsity must be in [0, 1]");

    DeterministicRng rng(seed);
    Mdp mdp = Mdp::zeros(n_states, n_actions);

    std::vector<int> successors(n_states);
    for (int x = 0; x < n_states; ++x) {
        for (int a = 0; a < n_actions; ++a) {
            std::iota(successors.begin(), successors.end(), 0);
            // partial Fisher-Yates: the first `branching` entries
            for (int k = 0; k < branching; ++k) {
                const int j = k + static_cast<int>(rng.below(n_states - k));
                std::swap(successors[k], successors[j]);
            }
            const Vector probs = rng.simplex(branching);
            for (int k = 0; k < branching; ++k)
                mdp.transition_prob(x, a, successors[k]) = probs[k];
        }
    }

    for (int x = 0; x < n_states; ++x)
        for (int a = 0; a < n_actions; ++a) {
            const double value = rng.uniform01();
            const double zero_draw = rng.uniform01();
            mdp.reward(x, a) = zero_draw < reward_sparsity ? 0.0 : value;
        }

    mdp.initial_dist.assign(n_states, 1.0 / n_states);
    mdp.validate();
    return mdp;
}

} // namespace mdplab
