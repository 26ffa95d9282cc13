// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0
//
// evkit command-line front end. One subcommand per module, file-in/file-out,
// JSON on stdout with --json, diagnostics on stderr. Exit codes: 0 success,
// 1 validation error, 2 I/O error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "evkit/deploysim.hpp"
#include "evkit/deploysim_json.hpp"
#include "evkit/errors.hpp"
#include "evkit/packing.hpp"
#include "evkit/partition.hpp"
#include "evkit/quant.hpp"
#include "evkit/rlaif.hpp"
#include "evkit/schema.hpp"
#include "evkit/tensor_io.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

struct Options {
    bool json = false;
};

void emit(const ordered_json& doc) { std::cout << doc.dump(2) << "\n"; }

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw evkit::IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw evkit::InvalidArgument(path.string() + ": " + e.what());
    }
}

void write_json_file(const fs::path& path, const ordered_json& doc) {
    std::ofstream out(path);
    if (!out)
        throw evkit::IoError("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << "\n";
    out.flush();
    if (!out)
        throw evkit::IoError("write failed: " + path.string());
}

const json& field(const json& j, const char* key, const std::string& ctx) {
    if (!j.is_object())
        throw evkit::InvalidArgument(ctx + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end())
        throw evkit::InvalidArgument(ctx + "." + key + ": missing");
    return *it;
}

// ---------------------------------------------------------------- plan ----

struct PlanArgs {
    int width = 0, height = 0;
    int vit_width = 448, vit_height = 448;
    int patch = 14, queries = 96, max_slices = 9;
    bool emit_schema = false, emit_posembed = false;
};

ordered_json slice_to_json(const evkit::SliceRect& s) {
    return {{"col", s.col},     {"row", s.row},     {"src_x", s.src_x},
            {"src_y", s.src_y}, {"src_w", s.src_w}, {"src_h", s.src_h},
            {"enc_w", s.enc_w}, {"enc_h", s.enc_h}};
}

// Row separators are shown as the two characters `\n` so the layout stays
// one token per line.
std::string printable_token(const std::string& token, const evkit::schema::SchemaConfig& cfg) {
    return token == cfg.row_sep ? "\\n" : token;
}

void run_plan(const PlanArgs& a, const Options& opt) {
    const evkit::ImageGeometry img(a.width, a.height);
    const evkit::EncoderProfile enc(a.vit_width, a.vit_height, a.patch, a.queries,
                                    a.max_slices);
    const evkit::PartitionPlan plan = evkit::plan_partition(img, enc);
    const evkit::schema::SchemaConfig cfg;

    if (opt.json) {
        ordered_json doc;
        doc["columns"] = plan.columns;
        doc["rows"] = plan.rows;
        doc["score"] = plan.score;
        doc["slices"] = ordered_json::array();
        for (const evkit::SliceRect& s : plan.slices)
            doc["slices"].push_back(slice_to_json(s));
        doc["overview"] = plan.overview ? slice_to_json(*plan.overview) : ordered_json();
        doc["visual_token_count"] = plan.visual_token_count;
        if (a.emit_schema) {
            const evkit::schema::TokenLayout layout =
                evkit::schema::serialize_layout(plan, enc, cfg);
            doc["schema_tokens"] = layout.tokens;
        }
        if (a.emit_posembed) {
            ordered_json pe;
            pe["source_rows"] = enc.vit_height_px / enc.patch_px;
            pe["source_cols"] = enc.vit_width_px / enc.patch_px;
            pe["targets"] = ordered_json::array();
            for (const evkit::SliceRect& s : plan.slices)
                pe["targets"].push_back(
                    {{"rows", s.enc_h / enc.patch_px}, {"cols", s.enc_w / enc.patch_px}});
            if (plan.overview)
                pe["targets"].push_back({{"rows", plan.overview->enc_h / enc.patch_px},
                                         {"cols", plan.overview->enc_w / enc.patch_px}});
            doc["posembed"] = pe;
        }
        emit(doc);
        return;
    }

    std::cout << "grid: " << plan.columns << "x" << plan.rows << "  score: " << plan.score
              << "\n";
    for (const evkit::SliceRect& s : plan.slices)
        std::cout << "slice (" << s.col << "," << s.row << "): src +" << s.src_x << "+"
                  << s.src_y << " " << s.src_w << "x" << s.src_h << " -> enc " << s.enc_w
                  << "x" << s.enc_h << "\n";
    if (plan.overview)
        std::cout << "overview: " << plan.overview->src_w << "x" << plan.overview->src_h
                  << " -> enc " << plan.overview->enc_w << "x" << plan.overview->enc_h
                  << "\n";
    std::cout << "visual tokens: " << plan.visual_token_count << "\n";
    if (a.emit_schema) {
        const evkit::schema::TokenLayout layout =
            evkit::schema::serialize_layout(plan, enc, cfg);
        for (const std::string& token : layout.tokens)
            std::cout << printable_token(token, cfg) << "\n";
    }
    if (a.emit_posembed) {
        std::cout << "posembed source: " << enc.vit_height_px / enc.patch_px << "x"
                  << enc.vit_width_px / enc.patch_px << "\n";
        for (const evkit::SliceRect& s : plan.slices)
            std::cout << "posembed slice (" << s.col << "," << s.row
                      << "): " << s.enc_h / enc.patch_px << "x" << s.enc_w / enc.patch_px
                      << "\n";
        if (plan.overview)
            std::cout << "posembed overview: " << plan.overview->enc_h / enc.patch_px << "x"
                      << plan.overview->enc_w / enc.patch_px << "\n";
    }
}

// ---------------------------------------------------------------- pack ----

struct PackArgs {
    std::string manifest;
    std::int64_t length = 0;
    std::string tail = "pad";
    std::string out;
};

void run_pack(const PackArgs& a, const Options& opt) {
    const json manifest = read_json_file(a.manifest);
    if (!manifest.is_array())
        throw evkit::InvalidArgument("manifest: expected an array of samples");
    std::vector<evkit::packing::SampleRecord> samples;
    for (std::size_t i = 0; i < manifest.size(); ++i) {
        const std::string ctx = "manifest[" + std::to_string(i) + "]";
        const json& id = field(manifest[i], "id", ctx);
        const json& len = field(manifest[i], "length", ctx);
        if (!id.is_string())
            throw evkit::InvalidArgument(ctx + ".id: expected a string");
        if (!len.is_number_integer())
            throw evkit::InvalidArgument(ctx + ".length: expected an integer");
        samples.push_back({id.get<std::string>(), len.get<std::int64_t>()});
    }

    const evkit::packing::TailPolicy tail = a.tail == "drop"
                                                ? evkit::packing::TailPolicy::Drop
                                                : evkit::packing::TailPolicy::Pad;
    const evkit::packing::PackResult result = evkit::packing::pack(samples, a.length, tail);

    ordered_json sequences = ordered_json::array();
    for (const evkit::packing::PackedSequence& seq : result.sequences) {
        ordered_json segments = ordered_json::array();
        for (const evkit::packing::PackedSegment& seg : seq.segments)
            segments.push_back({{"id", seg.sample_id},
                                {"len", seg.taken_length},
                                {"truncated", seg.truncated}});
        sequences.push_back({{"segments", segments}, {"pad", seq.pad_length}});
    }

    if (!a.out.empty()) {
        write_json_file(a.out, sequences);
        ordered_json summary = {{"sequences", result.sequences.size()},
                                {"truncated_tokens", result.truncated_tokens},
                                {"dropped_tail_tokens", result.dropped_tail_tokens},
                                {"out", a.out}};
        if (opt.json)
            emit(summary);
        else
            std::cerr << "packed " << result.sequences.size() << " sequence(s) into "
                      << a.out << " (truncated " << result.truncated_tokens
                      << ", dropped tail " << result.dropped_tail_tokens << ")\n";
        return;
    }
    if (opt.json) {
        emit(sequences);
        return;
    }
    for (std::size_t i = 0; i < result.sequences.size(); ++i) {
        std::cout << "seq " << i << ":";
        for (const evkit::packing::PackedSegment& seg : result.sequences[i].segments)
            std::cout << " " << seg.sample_id << ":" << seg.taken_length
                      << (seg.truncated ? "(truncated)" : "");
        std::cout << " pad:" << result.sequences[i].pad_length << "\n";
    }
    std::cout << "truncated tokens: " << result.truncated_tokens
              << "  dropped tail tokens: " << result.dropped_tail_tokens << "\n";
}

// ----------------------------------------------------------- quantize ----

evkit::quant::WeightTensor load_weight_tensor(const std::string& path) {
    const std::vector<float> values = evkit::io::read_float_tensor(path);
    evkit::quant::WeightTensor tensor;
    tensor.name = fs::path(path).stem().string();
    tensor.values.resize(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
        tensor.values[static_cast<Eigen::Index>(i)] = values[i];
    return tensor;
}

void run_quantize(const std::string& in, const std::string& out, std::uint32_t block,
                  const Options& opt) {
    const evkit::quant::WeightTensor tensor = load_weight_tensor(in);
    evkit::quant::QuantizedTensor q = evkit::quant::quantize(tensor, block);
    evkit::io::write_quantized(out, q);
    if (opt.json)
        emit({{"in", in},
              {"out", out},
              {"length", q.length},
              {"block_size", q.block_size},
              {"blocks", q.blocks.size()}});
    else
        std::cerr << "quantized " << q.length << " weights into " << q.blocks.size()
                  << " block(s) -> " << out << "\n";
}

void run_dequantize(const std::string& in, const std::string& out, const Options& opt) {
    const evkit::quant::QuantizedTensor q = evkit::io::read_quantized(in);
    const evkit::quant::WeightTensor tensor = evkit::quant::dequantize(q);
    std::vector<float> values(static_cast<std::size_t>(tensor.values.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = static_cast<float>(tensor.values[static_cast<Eigen::Index>(i)]);
    evkit::io::write_float_tensor(out, values);
    if (opt.json)
        emit({{"in", in}, {"out", out}, {"length", q.length}});
    else
        std::cerr << "dequantized " << q.length << " weights -> " << out << "\n";
}

void run_quant_report(const std::string& in, std::uint32_t block, const Options& opt) {
    const evkit::quant::WeightTensor tensor = load_weight_tensor(in);
    const evkit::quant::QuantizedTensor q = evkit::quant::quantize(tensor, block);
    const evkit::quant::QuantError err = evkit::quant::quant_error(tensor, q);
    const std::uint64_t n = q.length;
    const std::uint64_t fp16 =
        n == 0 ? 0 : evkit::quant::memory_footprint(n, evkit::quant::MemoryScheme::fp16());
    const std::uint64_t q4 =
        n == 0 ? 0
               : evkit::quant::memory_footprint(n, evkit::quant::MemoryScheme::q4_block(block));
    if (opt.json) {
        emit({{"length", n},
              {"block_size", block},
              {"max_abs", err.max_abs},
              {"rmse", err.rmse},
              {"fp16_bytes", fp16},
              {"q4_bytes", q4}});
        return;
    }
    std::cout << "length: " << n << "  block: " << block << "\n"
              << "max_abs: " << err.max_abs << "  rmse: " << err.rmse << "\n"
              << "footprint fp16: " << fp16 << " bytes, q4_block(" << block << "): " << q4
              << " bytes\n";
}

// -------------------------------------------------------------- rlaif ----

std::string string_field(const json& j, const char* key, const std::string& ctx) {
    const json& v = field(j, key, ctx);
    if (!v.is_string())
        throw evkit::InvalidArgument(ctx + "." + key + ": expected a string");
    return v.get<std::string>();
}

std::vector<evkit::rlaif::ResponseRecord> responses_from_json(const json& doc) {
    if (!doc.is_array())
        throw evkit::InvalidArgument("responses: expected an array");
    std::vector<evkit::rlaif::ResponseRecord> out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string ctx = "responses[" + std::to_string(i) + "]";
        evkit::rlaif::ResponseRecord r;
        r.response_id = string_field(doc[i], "response_id", ctx);
        r.instruction_id = string_field(doc[i], "instruction_id", ctx);
        const json& claims = field(doc[i], "claims", ctx);
        if (!claims.is_array())
            throw evkit::InvalidArgument(ctx + ".claims: expected an array");
        for (std::size_t k = 0; k < claims.size(); ++k) {
            const std::string cctx = ctx + ".claims[" + std::to_string(k) + "]";
            const json& valid = field(claims[k], "valid", cctx);
            if (!valid.is_boolean())
                throw evkit::InvalidArgument(cctx + ".valid: expected a boolean");
            r.claims.push_back({string_field(claims[k], "text", cctx), valid.get<bool>()});
        }
        out.push_back(std::move(r));
    }
    return out;
}

void run_rlaif_score(const std::string& in, const std::string& out, const Options& opt) {
    const json doc = read_json_file(in);
    const std::vector<evkit::rlaif::ResponseRecord> responses = responses_from_json(doc);

    ordered_json scored = ordered_json::array();
    for (const evkit::rlaif::ResponseRecord& r : responses) {
        ordered_json claims = ordered_json::array();
        for (const evkit::rlaif::ClaimVerdict& c : r.claims)
            claims.push_back({{"text", c.text}, {"valid", c.valid}});
        const int score = evkit::rlaif::score_response(r.claims);
        scored.push_back({{"response_id", r.response_id},
                          {"instruction_id", r.instruction_id},
                          {"claims", std::move(claims)},
                          {"score", score}});
    }
    if (!out.empty()) {
        write_json_file(out, scored);
        if (opt.json)
            emit({{"responses", responses.size()}, {"out", out}});
        else
            std::cerr << "scored " << responses.size() << " response(s) -> " << out << "\n";
        return;
    }
    if (opt.json) {
        emit(scored);
        return;
    }
    for (const auto& obj : scored)
        std::cout << obj.at("response_id").get<std::string>() << " "
                  << obj.at("score").get<int>() << "\n";
}

void run_rlaif_pairs(const std::string& in, std::uint64_t seed, int max_pairs,
                     const std::string& out, const Options& opt) {
    const json doc = read_json_file(in);
    if (!doc.is_array())
        throw evkit::InvalidArgument("responses: expected an array");

    // Accept both scored entries and raw ones that still carry claims.
    std::vector<evkit::rlaif::ScoredResponse> scored;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string ctx = "responses[" + std::to_string(i) + "]";
        evkit::rlaif::ScoredResponse s;
        s.response_id = string_field(doc[i], "response_id", ctx);
        s.instruction_id = string_field(doc[i], "instruction_id", ctx);
        if (doc[i].contains("score")) {
            const json& score = doc[i]["score"];
            if (!score.is_number_integer())
                throw evkit::InvalidArgument(ctx + ".score: expected an integer");
            s.score = score.get<int>();
        } else if (doc[i].contains("claims")) {
            std::vector<evkit::rlaif::ClaimVerdict> claims;
            const json& arr = doc[i]["claims"];
            if (!arr.is_array())
                throw evkit::InvalidArgument(ctx + ".claims: expected an array");
            for (const json& c : arr) {
                const json& valid = field(c, "valid", ctx + ".claims");
                if (!valid.is_boolean())
                    throw evkit::InvalidArgument(ctx + ".claims.valid: expected a boolean");
                claims.push_back({std::string(), valid.get<bool>()});
            }
            s.score = evkit::rlaif::score_response(claims);
        } else {
            throw evkit::InvalidArgument(ctx + ".score: missing (and no claims to score)");
        }
        scored.push_back(std::move(s));
    }

    const std::vector<evkit::rlaif::PreferencePair> pairs =
        evkit::rlaif::build_preference_pairs(scored, seed, max_pairs);

    ordered_json arr = ordered_json::array();
    for (const evkit::rlaif::PreferencePair& p : pairs)
        arr.push_back({{"instruction_id", p.instruction_id},
                       {"winner_id", p.winner_id},
                       {"loser_id", p.loser_id},
                       {"winner_score", p.winner_score},
                       {"loser_score", p.loser_score}});
    if (!out.empty()) {
        write_json_file(out, arr);
        if (opt.json)
            emit({{"pairs", pairs.size()}, {"seed", seed}, {"out", out}});
        else
            std::cerr << "sampled " << pairs.size() << " pair(s) -> " << out << "\n";
        return;
    }
    if (opt.json) {
        emit(arr);
        return;
    }
    for (const evkit::rlaif::PreferencePair& p : pairs)
        std::cout << p.instruction_id << ": " << p.winner_id << " (" << p.winner_score
                  << ") > " << p.loser_id << " (" << p.loser_score << ")\n";
}

// ----------------------------------------------------------- simulate ----

void run_simulate(const std::string& device_path, const std::string& model_path,
                  const std::string& config_path, const Options& opt) {
    const evkit::deploysim::DeviceProfile device =
        evkit::deploysim::device_from_json(read_json_file(device_path));
    const evkit::deploysim::ModelProfile model =
        evkit::deploysim::model_from_json(read_json_file(model_path));
    const evkit::deploysim::DeployConfig config =
        evkit::deploysim::config_from_json(read_json_file(config_path));
    const evkit::deploysim::SimMetrics metrics =
        evkit::deploysim::simulate(device, model, config);
    if (opt.json) {
        emit(evkit::deploysim::to_json(metrics));
        return;
    }
    std::cout << "peak memory: " << metrics.peak_mem_bytes << " bytes\n"
              << "encode latency: " << metrics.encode_latency_s << " s\n"
              << "decode throughput: " << metrics.decode_tokens_per_s << " tok/s\n";
}

void run_search(const std::string& device_path, const std::string& model_path,
                const std::string& space_path, const std::string& objective,
                const Options& opt) {
    const evkit::deploysim::DeviceProfile device =
        evkit::deploysim::device_from_json(read_json_file(device_path));
    const evkit::deploysim::ModelProfile model =
        evkit::deploysim::model_from_json(read_json_file(model_path));
    const std::vector<evkit::deploysim::DeployConfig> space =
        evkit::deploysim::space_from_json(read_json_file(space_path));
    const evkit::deploysim::Objective obj =
        objective == "latency" ? evkit::deploysim::Objective::MinEncodeLatency
                               : evkit::deploysim::Objective::MaxDecodeThroughput;
    const auto [winner, metrics] = evkit::deploysim::config_search(device, model, space, obj);
    if (opt.json) {
        emit({{"config", evkit::deploysim::to_json(winner)},
              {"metrics", evkit::deploysim::to_json(metrics)}});
        return;
    }
    std::cout << "winner: " << evkit::deploysim::to_json(winner).dump() << "\n"
              << "peak memory: " << metrics.peak_mem_bytes << " bytes\n"
              << "encode latency: " << metrics.encode_latency_s << " s\n"
              << "decode throughput: " << metrics.decode_tokens_per_s << " tok/s\n";
}

} // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"evkit: adaptive visual encoding toolkit"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", "evkit 0.1.0");
    app.add_flag("--json", opt.json, "emit machine-readable JSON on stdout");

    PlanArgs plan;
    CLI::App* plan_cmd =
        app.add_subcommand("plan", "partition an image into encoder-sized slices");
    plan_cmd->add_option("--width", plan.width, "image width in px")->required();
    plan_cmd->add_option("--height", plan.height, "image height in px")->required();
    plan_cmd->add_option("--vit-width", plan.vit_width, "encoder width in px");
    plan_cmd->add_option("--vit-height", plan.vit_height, "encoder height in px");
    plan_cmd->add_option("--patch", plan.patch, "patch size in px");
    plan_cmd->add_option("--queries", plan.queries, "visual tokens per slice");
    plan_cmd->add_option("--max-slices", plan.max_slices, "ideal slice count cap");
    plan_cmd->add_flag("--emit-schema", plan.emit_schema, "print the token layout");
    plan_cmd->add_flag("--emit-posembed", plan.emit_posembed,
                       "print position-embedding grid shapes");
    plan_cmd->callback([&] { run_plan(plan, opt); });

    PackArgs pack;
    CLI::App* pack_cmd =
        app.add_subcommand("pack", "pack variable-length samples into fixed sequences");
    pack_cmd->add_option("--manifest", pack.manifest, "sample manifest JSON")->required();
    pack_cmd->add_option("--length", pack.length, "sequence capacity")->required();
    pack_cmd->add_option("--tail", pack.tail, "tail policy")
        ->check(CLI::IsMember({"pad", "drop"}));
    pack_cmd->add_option("--out", pack.out, "write packed sequences to this file");
    pack_cmd->callback([&] { run_pack(pack, opt); });

    std::string q_in, q_out;
    std::uint32_t q_block = 32;
    CLI::App* quantize_cmd = app.add_subcommand("quantize", "quantize a .evwq to .evq4");
    quantize_cmd->add_option("--in", q_in, "input .evwq")->required();
    quantize_cmd->add_option("--out", q_out, "output .evq4")->required();
    quantize_cmd->add_option("--block", q_block, "quantization block size");
    quantize_cmd->callback([&] { run_quantize(q_in, q_out, q_block, opt); });

    std::string dq_in, dq_out;
    CLI::App* dequantize_cmd =
        app.add_subcommand("dequantize", "reconstruct a .evwq from .evq4");
    dequantize_cmd->add_option("--in", dq_in, "input .evq4")->required();
    dequantize_cmd->add_option("--out", dq_out, "output .evwq")->required();
    dequantize_cmd->callback([&] { run_dequantize(dq_in, dq_out, opt); });

    std::string qr_in;
    std::uint32_t qr_block = 32;
    CLI::App* report_cmd =
        app.add_subcommand("quant-report", "reconstruction error and memory footprint");
    report_cmd->add_option("--in", qr_in, "input .evwq")->required();
    report_cmd->add_option("--block", qr_block, "quantization block size");
    report_cmd->callback([&] { run_quant_report(qr_in, qr_block, opt); });

    CLI::App* rlaif_cmd = app.add_subcommand("rlaif", "feedback scoring and DPO utilities");
    rlaif_cmd->require_subcommand(1);

    std::string rs_in, rs_out;
    CLI::App* score_cmd = rlaif_cmd->add_subcommand("score", "score responses by -n_invalid");
    score_cmd->add_option("--in", rs_in, "responses JSON")->required();
    score_cmd->add_option("--out", rs_out, "write scored responses to this file");
    score_cmd->callback([&] { run_rlaif_score(rs_in, rs_out, opt); });

    std::string rp_in, rp_out;
    std::uint64_t rp_seed = 0;
    int rp_max_pairs = 2;
    CLI::App* pairs_cmd = rlaif_cmd->add_subcommand("pairs", "sample preference pairs");
    pairs_cmd->add_option("--in", rp_in, "scored responses JSON")->required();
    pairs_cmd->add_option("--seed", rp_seed, "sampling seed")->envname("EVK_SEED");
    pairs_cmd->add_option("--max-pairs", rp_max_pairs, "pairs per instruction");
    pairs_cmd->add_option("--out", rp_out, "write pairs to this file");
    pairs_cmd->callback([&] { run_rlaif_pairs(rp_in, rp_seed, rp_max_pairs, rp_out, opt); });

    double beta = 0.1, lwp = 0, lwr = 0, llp = 0, llr = 0;
    CLI::App* dpo_cmd = rlaif_cmd->add_subcommand("dpo-loss", "DPO loss and gradients");
    dpo_cmd->add_option("--beta", beta, "preference temperature")->required();
    dpo_cmd->add_option("--lwp", lwp, "policy log-prob of the winner")->required();
    dpo_cmd->add_option("--lwr", lwr, "reference log-prob of the winner")->required();
    dpo_cmd->add_option("--llp", llp, "policy log-prob of the loser")->required();
    dpo_cmd->add_option("--llr", llr, "reference log-prob of the loser")->required();
    dpo_cmd->callback([&] {
        const evkit::rlaif::DpoResult r = evkit::rlaif::dpo_loss(beta, lwp, lwr, llp, llr);
        emit({{"loss", r.loss}, {"grad_winner", r.grad_winner}, {"grad_loser", r.grad_loser}});
    });

    std::string sim_device, sim_model, sim_config;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "evaluate one deployment config");
    sim_cmd->add_option("--device", sim_device, "device profile JSON")->required();
    sim_cmd->add_option("--model", sim_model, "model profile JSON")->required();
    sim_cmd->add_option("--config", sim_config, "deploy config JSON")->required();
    sim_cmd->callback([&] { run_simulate(sim_device, sim_model, sim_config, opt); });

    std::string se_device, se_model, se_space, se_objective = "throughput";
    CLI::App* search_cmd = app.add_subcommand("search", "pick the best deployment config");
    search_cmd->add_option("--device", se_device, "device profile JSON")->required();
    search_cmd->add_option("--model", se_model, "model profile JSON")->required();
    search_cmd->add_option("--space", se_space, "config space JSON")->required();
    search_cmd->add_option("--objective", se_objective, "search objective")
        ->check(CLI::IsMember({"throughput", "latency"}));
    search_cmd->callback([&] { run_search(se_device, se_model, se_space, se_objective, opt); });

    const std::function<bool(CLI::App*)> all = [](CLI::App*) { return true; };
    for (CLI::App* sub : app.get_subcommands(all)) {
        sub->fallthrough();
        for (CLI::App* nested : sub->get_subcommands(all))
            nested->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForVersion& e) {
        std::cout << e.what() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    } catch (const evkit::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const evkit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
