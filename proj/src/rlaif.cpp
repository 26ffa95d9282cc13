// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#include "evkit/rlaif.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <utility>

#include "evkit/rng.hpp"

namespace evkit::rlaif {

int score_response(std::span<const ClaimVerdict> claims) {
    int invalid = 0;
    for (const ClaimVerdict& claim : claims)
        if (!claim.valid)
            ++invalid;
    return -invalid;
}

ScoredResponse score_response(const ResponseRecord& response) {
    return {response.response_id, response.instruction_id, score_response(response.claims)};
}

namespace {

std::vector<PreferencePair> pairs_for_instruction(const std::string& instruction_id,
                                                  std::span<const ScoredResponse> group,
                                                  std::uint64_t seed, int max_pairs) {
    std::vector<PreferencePair> candidates;
    for (const ScoredResponse& a : group)
        for (const ScoredResponse& b : group)
            if (a.score > b.score)
                candidates.push_back(
                    {instruction_id, a.response_id, b.response_id, a.score, b.score});

    std::mt19937_64 gen(rng::splitmix64(seed) ^ rng::fnv1a64(instruction_id));
    const std::size_t want =
        std::min(candidates.size(), static_cast<std::size_t>(max_pairs));
    // Partial Fisher-Yates: the first `want` slots end up being a uniform
    // draw without replacement.
    for (std::size_t i = 0; i < want; ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(rng::uniform_index(gen, candidates.size() - i));
        std::swap(candidates[i], candidates[j]);
    }
    candidates.resize(want);
    return candidates;
}

} // namespace

std::vector<PreferencePair>
build_preference_pairs(std::span<const ScoredResponse> responses, std::uint64_t seed,
                       int max_pairs_per_instruction) {
    if (max_pairs_per_instruction < 1)
        throw InvalidArgument("max pairs per instruction must be positive");

    // Group by instruction, keeping instructions in first-seen order.
    std::vector<std::string> order;
    std::map<std::string, std::vector<ScoredResponse>> groups;
    for (const ScoredResponse& r : responses) {
        auto [it, inserted] = groups.try_emplace(r.instruction_id);
        if (inserted)
            order.push_back(r.instruction_id);
        it->second.push_back(r);
    }

    std::vector<PreferencePair> out;
    for (const std::string& id : order) {
        std::vector<PreferencePair> pairs =
            pairs_for_instruction(id, groups.at(id), seed, max_pairs_per_instruction);
        out.insert(out.end(), std::make_move_iterator(pairs.begin()),
                   std::make_move_iterator(pairs.end()));
    }
    return out;
}

std::vector<PreferencePair>
build_preference_pairs(std::span<const ResponseRecord> responses, std::uint64_t seed,
                       int max_pairs_per_instruction) {
    std::vector<ScoredResponse> scored;
    scored.reserve(responses.size());
    for (const ResponseRecord& r : responses)
        scored.push_back(score_response(r));
    return build_preference_pairs(std::span<const ScoredResponse>(scored), seed,
                                  max_pairs_per_instruction);
}

DpoResult dpo_loss(double beta, double policy_logp_winner, double ref_logp_winner,
                   double policy_logp_loser, double ref_logp_loser) {
    if (!(beta > 0.0))
        throw BadBeta("beta must be positive");

    const double margin = (policy_logp_winner - ref_logp_winner) -
                          (policy_logp_loser - ref_logp_loser);
    const double z = -beta * margin;
    DpoResult r;
    // softplus(z) without overflow for large |z|.
    r.loss = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    const double sigma = 1.0 / (1.0 + std::exp(-z));
    r.grad_winner = -beta * sigma;
    r.grad_loser = beta * sigma;
    return r;
}

} // namespace evkit::rlaif
