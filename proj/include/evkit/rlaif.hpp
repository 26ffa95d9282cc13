// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evkit/errors.hpp"

namespace evkit::rlaif {

// One atomic claim extracted from a response, with its verification verdict.
struct ClaimVerdict {
    std::string text;
    bool valid = false;
};

struct ResponseRecord {
    std::string response_id;
    std::string instruction_id;
    std::vector<ClaimVerdict> claims;
};

struct ScoredResponse {
    std::string response_id;
    std::string instruction_id;
    int score = 0;

    friend bool operator==(const ScoredResponse&, const ScoredResponse&) = default;
};

struct PreferencePair {
    std::string instruction_id;
    std::string winner_id;
    std::string loser_id;
    int winner_score = 0;
    int loser_score = 0;

    friend bool operator==(const PreferencePair&, const PreferencePair&) = default;
};

// Score is the negated number of invalid claims: zero is best, a response
// with no claims scores zero.
int score_response(std::span<const ClaimVerdict> claims);

ScoredResponse score_response(const ResponseRecord& response);

// For each instruction, every ordered pair with strictly higher winner score
// is a candidate; up to max_pairs_per_instruction of them are drawn without
// replacement. Sampling is seeded per instruction id, so the draw for one
// instruction does not depend on which other instructions are present.
std::vector<PreferencePair>
build_preference_pairs(std::span<const ScoredResponse> responses, std::uint64_t seed,
                       int max_pairs_per_instruction);

std::vector<PreferencePair>
build_preference_pairs(std::span<const ResponseRecord> responses, std::uint64_t seed,
                       int max_pairs_per_instruction);

struct DpoResult {
    double loss = 0.0;
    double grad_winner = 0.0; // d loss / d (policy log-prob of the winner)
    double grad_loser = 0.0;  // d loss / d (policy log-prob of the loser)
};

// Preference loss log(1 + exp(-beta * margin)) where the margin is the
// policy-vs-reference log-prob gap of the winner minus that of the loser.
DpoResult dpo_loss(double beta, double policy_logp_winner, double ref_logp_winner,
                   double policy_logp_loser, double ref_logp_loser);

} // namespace evkit::rlaif
