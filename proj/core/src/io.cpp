#include "mdplab/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mdplab {

namespace {

using nlohmann::json;

json parse_text(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(what + ": " + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

Matrix matrix_from_json(const json& rows, const std::string& what) {
    if (!rows.is_array() || rows.empty())
        throw ParseError(what + ": expected a non-empty array of rows");
    const int n_rows = static_cast<int>(rows.size());
    const int n_cols = static_cast<int>(rows[0].size());
    Matrix m(n_rows, n_cols);
    for (int i = 0; i < n_rows; ++i) {
        if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n_cols)
            throw ParseError(what + ": row " + std::to_string(i) + " has inconsistent length");
        for (int j = 0; j < n_cols; ++j) {
            if (!rows[i][j].is_number())
                throw ParseError(what + ": non-numeric entry at row " + std::to_string(i));
            m(i, j) = rows[i][j].get<double>();
        }
    }
    return m;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

const json& require_field(const json& obj, const char* key, const std::string& what) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(what + ": missing field '" + key + "'");
    return *it;
}

} // namespace

Mdp mdp_from_json_text(const std::string& text) {
    const json doc = parse_text(text, "MDP file");
    if (!doc.is_object()) throw ParseError("MDP file: top level must be an object");

    Mdp mdp;
    try {
        mdp.n_states = require_field(doc, "n_states", "MDP file").get<int>();
        mdp.n_actions = require_field(doc, "n_actions", "MDP file").get<int>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("MDP file: bad n_states/n_actions: ") + e.what());
    }
    if (mdp.n_states < 1 || mdp.n_actions < 1)
        throw ParseError("MDP file: n_states and n_actions must be positive");

    const json& trans = require_field(doc, "transition", "MDP file");
    if (!trans.is_array() || static_cast<int>(trans.size()) != mdp.n_states)
        throw ParseError("MDP file: transition must be an array of n_states entries");
    mdp.transition.reserve(static_cast<size_t>(mdp.n_states) * mdp.n_actions * mdp.n_states);
    for (int x = 0; x < mdp.n_states; ++x) {
        if (!trans[x].is_array() || static_cast<int>(trans[x].size()) != mdp.n_actions)
            throw ParseError("MDP file: transition[" + std::to_string(x) +
                             "] must hold n_actions rows");
        for (int a = 0; a < mdp.n_actions; ++a) {
            const json& row = trans[x][a];
            if (!row.is_array() || static_cast<int>(row.size()) != mdp.n_states)
                throw ParseError("MDP file: transition[" + std::to_string(x) + "][" +
                                 std::to_string(a) + "] must hold n_states probabilities");
            for (int y = 0; y < mdp.n_states; ++y) {
                if (!row[y].is_number())
                    throw ParseError("MDP file: non-numeric transition probability at state " +
                                     std::to_string(x) + ", action " + std::to_string(a));
                mdp.transition.push_back(row[y].get<double>());
            }
        }
    }

    mdp.reward = matrix_from_json(require_field(doc, "reward", "MDP file"), "MDP file: reward");
    if (mdp.reward.rows() != mdp.n_states || mdp.reward.cols() != mdp.n_actions)
        throw ParseError("MDP file: reward must be n_states x n_actions");

    const json& mu = require_field(doc, "initial_dist", "MDP file");
    if (!mu.is_array() || static_cast<int>(mu.size()) != mdp.n_states)
        throw ParseError("MDP file: initial_dist must hold n_states probabilities");
    for (int x = 0; x < mdp.n_states; ++x) {
        if (!mu[x].is_number()) throw ParseError("MDP file: non-numeric initial_dist entry");
        mdp.initial_dist.push_back(mu[x].get<double>());
    }

    mdp.validate();
    return mdp;
}

std::string mdp_to_json_text(const Mdp& mdp) {
    json doc;
    doc["n_states"] = mdp.n_states;
    doc["n_actions"] = mdp.n_actions;
    json trans = json::array();
    for (int x = 0; x < mdp.n_states; ++x) {
        json per_action = json::array();
        for (int a = 0; a < mdp.n_actions; ++a) {
            json row = json::array();
            for (int y = 0; y < mdp.n_states; ++y) row.push_back(mdp.transition_prob(x, a, y));
            per_action.push_back(std::move(row));
        }
        trans.push_back(std::move(per_action));
    }
    doc["transition"] = std::move(trans);
    doc["reward"] = matrix_to_json(mdp.reward);
    doc["initial_dist"] = mdp.initial_dist;
    return doc.dump(2) + "\n";
}

Mdp load_mdp(const std::string& path) { return mdp_from_json_text(read_file(path)); }

void save_mdp(const Mdp& mdp, const std::string& path) {
    write_file(path, mdp_to_json_text(mdp));
}

Policy policy_from_json_text(const std::string& text) {
    const json doc = parse_text(text, "policy file");
    if (!doc.is_object()) throw ParseError("policy file: top level must be an object");
    Policy policy;
    policy.probs = matrix_from_json(require_field(doc, "probs", "policy file"),
                                    "policy file: probs");
    policy.validate();
    return policy;
}

std::string policy_to_json_text(const Policy& policy) {
    json doc;
    doc["probs"] = matrix_to_json(policy.probs);
    return doc.dump(2) + "\n";
}

Policy load_policy(const std::string& path) { return policy_from_json_text(read_file(path)); }

void save_policy(const Policy& policy, const std::string& path) {
    write_file(path, policy_to_json_text(policy));
}

} // namespace mdplab
