// Acceptance gate for the toolkit. Each criterion prints exactly one
// PASS/FAIL line; the process exits nonzero if any of them fail.
//
// Usage: acceptance <cli-binary> <golden-dir> <profiles-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "evkit/deploysim.hpp"
#include "evkit/deploysim_json.hpp"
#include "evkit/packing.hpp"
#include "evkit/partition.hpp"
#include "evkit/posembed.hpp"
#include "evkit/quant.hpp"
#include "evkit/resampler.hpp"
#include "evkit/rlaif.hpp"
#include "evkit/rng.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_golden;
fs::path g_profiles;

// ------------------------------------------------------------- helpers ----

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    static const fs::path capture =
        fs::temp_directory_path() /
        ("evkit_acceptance_" + std::to_string(std::random_device{}()));
    fs::create_directories(capture);
    const fs::path out = capture / "out.txt";
    const std::string cmd =
        g_cli + " " + args + " > '" + out.string() + "' 2> /dev/null";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    return r;
}

// ---------------------------------------------------------- criterion 1 ----
// Partition planning agrees with an independently written oracle on 10,000
// random image sizes and encoder profiles, in under five seconds.

bool partition_matches_oracle() {
    const evkit::EncoderProfile profiles[] = {
        evkit::EncoderProfile(448, 448, 14, 96, 9),
        evkit::EncoderProfile(336, 336, 14, 64, 9),
        evkit::EncoderProfile(448, 224, 14, 96, 9),
        evkit::EncoderProfile(448, 448, 14, 96, 4),
    };

    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 gen(1001);
    for (int it = 0; it < 10000; ++it) {
        const int w = 1 + static_cast<int>(evkit::rng::uniform_index(gen, 4096));
        const int h = 1 + static_cast<int>(evkit::rng::uniform_index(gen, 4096));
        const evkit::EncoderProfile& enc =
            profiles[evkit::rng::uniform_index(gen, std::size(profiles))];

        const evkit::PartitionPlan plan =
            evkit::plan_partition(evkit::ImageGeometry(w, h), enc);
        const oracles::GridChoice want = oracles::best_grid(
            w, h, enc.vit_width_px, enc.vit_height_px, enc.max_ideal_slices);
        if (plan.columns != want.columns || plan.rows != want.rows ||
            plan.score != want.score)
            return false;
    }
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    return elapsed.count() < 5.0;
}

// ---------------------------------------------------------- criterion 2 ----
// Over every size from 16x16 to 4096x4096 in steps of 16, the visual token
// budget stays in [96, 960] and both endpoints are reached.

bool token_budget_sweep() {
    const evkit::EncoderProfile enc;
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t hi = 0;
    for (int w = 16; w <= 4096; w += 16)
        for (int h = 16; h <= 4096; h += 16) {
            const std::int64_t n =
                evkit::plan_partition(evkit::ImageGeometry(w, h), enc).visual_token_count;
            lo = std::min(lo, n);
            hi = std::max(hi, n);
        }
    return lo == 96 && hi == 960;
}

// ---------------------------------------------------------- criterion 3 ----
// The aspect score hits the documented anchor for 800x600 and is exactly
// zero when the sliced aspect ratio matches the encoder.

bool aspect_score_anchor() {
    const evkit::EncoderProfile enc;
    const evkit::PartitionPlan landscape =
        evkit::plan_partition(evkit::ImageGeometry(800, 600), enc);
    if (std::abs(landscape.score - (-0.287682)) > 1e-6)
        return false;

    const evkit::PartitionPlan square =
        evkit::plan_partition(evkit::ImageGeometry(896, 896), enc);
    const evkit::PartitionPlan strip =
        evkit::plan_partition(evkit::ImageGeometry(1792, 448), enc);
    return square.score == 0.0 && strip.score == 0.0 && strip.columns == 4 &&
           strip.rows == 1;
}

// ---------------------------------------------------------- criterion 4 ----
// Corner aligned position embedding interpolation matches a two pass oracle
// to 1e-9 on 1,000 random grids, and resampling to the same size is the
// identity bit for bit.

bool interpolation_matches_oracle() {
    std::mt19937_64 gen(1004);
    for (int it = 0; it < 1000; ++it) {
        const Eigen::Index sh = 1 + static_cast<Eigen::Index>(evkit::rng::uniform_index(gen, 24));
        const Eigen::Index sw = 1 + static_cast<Eigen::Index>(evkit::rng::uniform_index(gen, 24));
        const Eigen::Index dim = 1 + static_cast<Eigen::Index>(evkit::rng::uniform_index(gen, 8));
        evkit::posembed::PosEmbedGrid<double> grid;
        grid.side_h = sh;
        grid.side_w = sw;
        grid.values.resize(sh * sw, dim);
        for (Eigen::Index i = 0; i < grid.values.size(); ++i)
            grid.values.data()[i] = evkit::rng::uniform_real(gen, -2.0, 2.0);

        const Eigen::Index th = 1 + static_cast<Eigen::Index>(evkit::rng::uniform_index(gen, 40));
        const Eigen::Index tw = 1 + static_cast<Eigen::Index>(evkit::rng::uniform_index(gen, 40));

        const evkit::posembed::PosEmbedGrid<double> got =
            evkit::posembed::interpolate_2d(grid, th, tw);
        const Eigen::MatrixXd want = oracles::interpolate_two_pass(grid.values, sh, sw, th, tw);
        if ((got.values - want).cwiseAbs().maxCoeff() > 1e-9)
            return false;

        const evkit::posembed::PosEmbedGrid<double> same =
            evkit::posembed::interpolate_2d(grid, sh, sw);
        if (!(same.values.array() == grid.values.array()).all())
            return false;
    }
    return true;
}

// ---------------------------------------------------------- criterion 5 ----
// The resampler always emits a fixed number of query outputs regardless of
// input token count, and every attention row is a probability distribution.

bool resampler_fixed_output() {
    const std::pair<Eigen::Index, Eigen::Index> grids[] = {{1, 1}, {8, 8}, {32, 32}};
    for (const Eigen::Index K : {64, 96}) {
        const evkit::resampler::ResamplerWeights<double> w =
            evkit::resampler::ResamplerWeights<double>::seeded(K, 64, 48, 42);
        for (const auto& [gh, gw] : grids) {
            evkit::resampler::SliceTokens<double> toks;
            toks.grid_h = gh;
            toks.grid_w = gw;
            toks.tokens = Eigen::MatrixXd::Random(gh * gw, 48);
            const Eigen::MatrixXd out = evkit::resampler::compress(toks, w);
            if (out.rows() != K || out.cols() != 64)
                return false;
        }
    }

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Eigen::Index K = seed % 2 ? 96 : 64;
        const evkit::resampler::ResamplerWeights<double> w =
            evkit::resampler::ResamplerWeights<double>::seeded(K, 64, 48, seed);
        evkit::resampler::SliceTokens<double> toks;
        toks.grid_h = 8;
        toks.grid_w = 8;
        toks.tokens = Eigen::MatrixXd::Random(64, 48);
        const Eigen::MatrixXd attn = evkit::resampler::attention_map(toks, w);
        for (Eigen::Index i = 0; i < attn.rows(); ++i)
            if (std::abs(attn.row(i).sum() - 1.0) > 1e-6)
                return false;
    }
    return true;
}

// ---------------------------------------------------------- criterion 6 ----
// 500 random packings: every sequence has the same capacity, attention never
// crosses a segment boundary (checked against a segment id oracle), and
// truncation only happens at the tail of a sequence.

bool packing_isolation() {
    std::mt19937_64 gen(1006);
    for (int it = 0; it < 500; ++it) {
        const std::int64_t capacity =
            8 + static_cast<std::int64_t>(evkit::rng::uniform_index(gen, 57));
        const std::size_t count = 1 + evkit::rng::uniform_index(gen, 50);
        std::vector<evkit::packing::SampleRecord> samples;
        for (std::size_t i = 0; i < count; ++i)
            samples.push_back(
                {"s" + std::to_string(i),
                 1 + static_cast<std::int64_t>(
                         evkit::rng::uniform_index(gen, capacity + 10))});
        const evkit::packing::TailPolicy policy = it % 2
                                                      ? evkit::packing::TailPolicy::Drop
                                                      : evkit::packing::TailPolicy::Pad;
        const evkit::packing::PackResult r =
            evkit::packing::pack(samples, capacity, policy);

        for (const evkit::packing::PackedSequence& seq : r.sequences) {
            if (seq.capacity != capacity)
                return false;
            std::int64_t used = 0;
            for (std::size_t k = 0; k < seq.segments.size(); ++k) {
                used += seq.segments[k].taken_length;
                if (seq.segments[k].truncated && k + 1 != seq.segments.size())
                    return false; // truncation anywhere but the tail
            }
            if (used + seq.pad_length != capacity)
                return false;

            const auto mask = evkit::packing::attention_mask(seq, false);
            const std::vector<int> ids = oracles::segment_ids(seq);
            for (Eigen::Index i = 0; i < mask.rows(); ++i)
                for (Eigen::Index j = 0; j < mask.cols(); ++j) {
                    const bool same =
                        ids[static_cast<std::size_t>(i)] >= 0 &&
                        ids[static_cast<std::size_t>(i)] == ids[static_cast<std::size_t>(j)];
                    if (mask(i, j) != same)
                        return false;
                }
        }
    }
    return true;
}

// ---------------------------------------------------------- criterion 7 ----
// Quantization error stays within half a scale step on 1,000 random tensors,
// and the footprint model reproduces the documented 17 GB / 5.31 GB numbers.

bool quantization_error_and_footprint() {
    std::mt19937_64 gen(1007);
    for (int it = 0; it < 1000; ++it) {
        const Eigen::Index n =
            1 + static_cast<Eigen::Index>(evkit::rng::uniform_index(gen, 256));
        evkit::quant::WeightTensor t;
        t.name = "t";
        t.values.resize(n);
        for (Eigen::Index i = 0; i < n; ++i)
            t.values[i] = evkit::rng::uniform_real(gen, -6.0, 6.0);
        const std::uint32_t block =
            1 + static_cast<std::uint32_t>(evkit::rng::uniform_index(gen, 64));

        const evkit::quant::QuantizedTensor q = evkit::quant::quantize(t, block);
        const evkit::quant::WeightTensor back = evkit::quant::dequantize(q);
        Eigen::Index i = 0;
        for (const evkit::quant::QuantBlock& b : q.blocks)
            for (std::size_t k = 0; k < b.codes.size(); ++k, ++i)
                if (std::abs(t.values[i] - back.values[i]) >
                    static_cast<double>(b.scale) / 2.0 + 1e-12)
                    return false;
    }

    const std::uint64_t fp16 = evkit::quant::memory_footprint(
        8'500'000'000ULL, evkit::quant::MemoryScheme::fp16());
    const std::uint64_t q4 = evkit::quant::memory_footprint(
        8'500'000'000ULL, evkit::quant::MemoryScheme::q4_block(32));
    return fp16 == 17'000'000'000ULL && q4 == 5'312'500'000ULL &&
           q4 >= 5'000'000'000ULL && q4 <= 5'500'000'000ULL;
}

// ---------------------------------------------------------- criterion 8 ----
// Feedback scores drop by exactly one per invalid claim, sampled preference
// pairs never tie, and pair sampling is bit reproducible for a fixed seed.

bool feedback_scoring_and_pairs() {
    for (int k = 0; k < 30; ++k) {
        std::vector<evkit::rlaif::ClaimVerdict> claims(
            static_cast<std::size_t>(k + 3), {"c", true});
        const int before = evkit::rlaif::score_response(claims);
        claims[0].valid = false;
        const int after = evkit::rlaif::score_response(claims);
        if (before - after != 1 || before != 0)
            return false;
    }

    std::mt19937_64 gen(1008);
    for (int it = 0; it < 50; ++it) {
        std::vector<evkit::rlaif::ScoredResponse> rs;
        const std::size_t n = 2 + evkit::rng::uniform_index(gen, 10);
        for (std::size_t i = 0; i < n; ++i)
            rs.push_back({"r" + std::to_string(i),
                          "i" + std::to_string(evkit::rng::uniform_index(gen, 3)),
                          -static_cast<int>(evkit::rng::uniform_index(gen, 4))});
        const std::uint64_t seed = gen();
        const auto a = evkit::rlaif::build_preference_pairs(rs, seed, 3);
        const auto b = evkit::rlaif::build_preference_pairs(rs, seed, 3);
        if (a != b)
            return false;
        for (const evkit::rlaif::PreferencePair& p : a)
            if (p.winner_score <= p.loser_score)
                return false;
    }
    return true;
}

// ---------------------------------------------------------- criterion 9 ----
// The preference loss equals ln 2 at zero margin and its analytic gradients
// match central finite differences at 1e-6 relative tolerance.

bool preference_loss_gradients() {
    const evkit::rlaif::DpoResult zero = evkit::rlaif::dpo_loss(0.7, -1.0, -1.0, -3.0, -3.0);
    if (std::abs(zero.loss - std::log(2.0)) > 1e-12)
        return false;

    std::mt19937_64 gen(1009);
    for (int it = 0; it < 1000; ++it) {
        const double beta = evkit::rng::uniform_real(gen, 0.05, 2.0);
        const double lwp = evkit::rng::uniform_real(gen, -5.0, 0.0);
        const double lwr = evkit::rng::uniform_real(gen, -5.0, 0.0);
        const double llp = evkit::rng::uniform_real(gen, -5.0, 0.0);
        const double llr = evkit::rng::uniform_real(gen, -5.0, 0.0);
        const evkit::rlaif::DpoResult r = evkit::rlaif::dpo_loss(beta, lwp, lwr, llp, llr);

        const double h = 1e-6;
        const double gw = oracles::central_difference(
            [&](double x) { return evkit::rlaif::dpo_loss(beta, x, lwr, llp, llr).loss; },
            lwp, h);
        const double gl = oracles::central_difference(
            [&](double x) { return evkit::rlaif::dpo_loss(beta, lwp, lwr, x, llr).loss; },
            llp, h);
        if (std::abs(r.grad_winner - gw) > 1e-6 * std::max(1e-12, std::abs(r.grad_winner)))
            return false;
        if (std::abs(r.grad_loser - gl) > 1e-6 * std::max(1e-12, std::abs(r.grad_loser)))
            return false;
    }
    return true;
}

// --------------------------------------------------------- criterion 10 ----
// On the shipped reference profiles: each single configuration change
// improves its target metric, the optimized config dominates the baseline on
// both metrics, and the exhaustive search matches a brute force oracle on
// 100 random candidate spaces.

bool deployment_monotonicity_and_search() {
    using namespace evkit::deploysim;
    const DeviceProfile device =
        device_from_json(nlohmann::json::parse(slurp(g_profiles / "device.json")));
    const ModelProfile model =
        model_from_json(nlohmann::json::parse(slurp(g_profiles / "model.json")));
    const evkit::quant::MemoryScheme q4 = evkit::quant::MemoryScheme::q4_block(32);

    DeployConfig c;
    c.threads = 2;
    c.quant_scheme = q4;

    // Loading mode: sequential strictly shrinks the peak and the latency here.
    c.loading = LoadingMode::Simultaneous;
    const SimMetrics sim = simulate(device, model, c);
    c.loading = LoadingMode::Sequential;
    const SimMetrics seq = simulate(device, model, c);
    if (!(seq.peak_mem_bytes < sim.peak_mem_bytes) ||
        !(seq.encode_latency_s < sim.encode_latency_s))
        return false;

    // Threads: every added thread helps both latency and throughput.
    double prev_lat = std::numeric_limits<double>::infinity();
    double prev_tps = 0.0;
    for (int t = 1; t <= device.cores; ++t) {
        c.threads = t;
        const SimMetrics m = simulate(device, model, c);
        if (!(m.encode_latency_s < prev_lat) || !(m.decode_tokens_per_s > prev_tps))
            return false;
        prev_lat = m.encode_latency_s;
        prev_tps = m.decode_tokens_per_s;
    }

    // Accelerator: raising the speedup keeps cutting encode latency.
    c.threads = device.cores;
    double prev = std::numeric_limits<double>::infinity();
    for (const double s : {1.0, 1.5, 2.0, 2.8}) {
        c.vit_accelerator_speedup = s;
        const SimMetrics m = simulate(device, model, c);
        if (!(m.encode_latency_s < prev))
            return false;
        prev = m.encode_latency_s;
    }

    // Endpoint comparison: the tuned config dominates the naive one.
    DeployConfig baseline;
    baseline.loading = LoadingMode::Simultaneous;
    baseline.threads = 2;
    baseline.quant_scheme = q4;
    DeployConfig optimized;
    optimized.loading = LoadingMode::Sequential;
    optimized.threads = device.cores;
    optimized.quant_scheme = q4;
    optimized.vit_accelerator_speedup = 2.8;
    const SimMetrics base_m = simulate(device, model, baseline);
    const SimMetrics opt_m = simulate(device, model, optimized);
    if (!(opt_m.encode_latency_s < base_m.encode_latency_s) ||
        !(opt_m.decode_tokens_per_s > base_m.decode_tokens_per_s))
        return false;

    std::mt19937_64 gen(1010);
    for (int it = 0; it < 100; ++it) {
        std::vector<DeployConfig> space;
        const std::size_t n = 1 + evkit::rng::uniform_index(gen, 16);
        for (std::size_t i = 0; i < n; ++i) {
            DeployConfig cand;
            cand.loading = evkit::rng::uniform_index(gen, 2) ? LoadingMode::Sequential
                                                             : LoadingMode::Simultaneous;
            cand.threads =
                1 + static_cast<int>(evkit::rng::uniform_index(gen, device.cores));
            cand.quant_scheme = evkit::rng::uniform_index(gen, 2)
                                    ? evkit::quant::MemoryScheme::q4_block(
                                          1 + static_cast<std::uint32_t>(
                                                  evkit::rng::uniform_index(gen, 64)))
                                    : evkit::quant::MemoryScheme::fp16();
            cand.vit_accelerator_speedup = 1.0 + evkit::rng::uniform_unit(gen) * 3.0;
            space.push_back(cand);
        }
        const Objective obj =
            it % 2 ? Objective::MaxDecodeThroughput : Objective::MinEncodeLatency;
        const auto [got, got_m] = config_search(device, model, space, obj);

        std::size_t best = 0;
        SimMetrics best_m = simulate(device, model, space[0]);
        for (std::size_t i = 1; i < n; ++i) {
            const SimMetrics m = simulate(device, model, space[i]);
            const bool better = obj == Objective::MinEncodeLatency
                                    ? m.encode_latency_s < best_m.encode_latency_s
                                    : m.decode_tokens_per_s > best_m.decode_tokens_per_s;
            if (better) {
                best = i;
                best_m = m;
            }
        }
        if (!(got == space[best]) || got_m.encode_latency_s != best_m.encode_latency_s ||
            got_m.decode_tokens_per_s != best_m.decode_tokens_per_s)
            return false;
    }
    return true;
}

// --------------------------------------------------------- criterion 11 ----
// The command line reproduces the frozen golden outputs byte for byte and
// fails cleanly on invalid input.

bool cli_golden_outputs() {
    const RunResult plan = run_cli("plan --width 800 --height 600 --json");
    if (plan.code != 0 || plan.out != slurp(g_golden / "plan_800x600.json"))
        return false;

    const RunResult dpo =
        run_cli("rlaif dpo-loss --beta 0.1 --lwp -1 --lwr -1.5 --llp -2 --llr -1.5");
    if (dpo.code != 0 || dpo.out != slurp(g_golden / "dpo_loss.json"))
        return false;

    const RunResult bad = run_cli("plan --width 0 --height 600 --json");
    return bad.code == 1 && bad.out.empty();
}

// --------------------------------------------------------------- driver ----

int g_failures = 0;

void report(int index, const char* label, bool (*check)()) {
    bool ok = false;
    try {
        ok = check();
    } catch (...) {
        ok = false;
    }
    std::printf("criterion %2d: %-68s %s\n", index, label, ok ? "PASS" : "FAIL");
    std::fflush(stdout);
    if (!ok)
        ++g_failures;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 4) {
        std::fprintf(stderr, "usage: %s <cli-binary> <golden-dir> <profiles-dir>\n",
                     argv[0]);
        return 2;
    }
    g_cli = argv[1];
    g_golden = argv[2];
    g_profiles = argv[3];

    report(1, "partition plans match the independent oracle on 10,000 sizes (<5 s)",
           partition_matches_oracle);
    report(2, "visual token budget spans exactly [96, 960] over the 16..4096 sweep",
           token_budget_sweep);
    report(3, "aspect score hits -0.287682 for 800x600 and is exactly 0 on matches",
           aspect_score_anchor);
    report(4, "position embedding interpolation matches the two pass oracle (1e-9)",
           interpolation_matches_oracle);
    report(5, "resampler emits K x d for 1/64/1024 tokens; attention rows sum to 1",
           resampler_fixed_output);
    report(6, "500 random packings: uniform length, no cross-segment attention",
           packing_isolation);
    report(7, "quantization error <= scale/2 + 1e-12; footprints 17.0 GB / 5.31 GB",
           quantization_error_and_footprint);
    report(8, "scores drop 1 per invalid claim; pairs never tie; seeds reproduce",
           feedback_scoring_and_pairs);
    report(9, "preference loss is ln 2 at zero margin; gradients match differences",
           preference_loss_gradients);
    report(10, "deployment knobs are monotone; search matches the brute force oracle",
           deployment_monotonicity_and_search);
    report(11, "CLI reproduces golden JSON byte for byte and exits 1 on bad input",
           cli_golden_outputs);

    return g_failures == 0 ? 0 : 1;
}
