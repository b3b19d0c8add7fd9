#include "cashare/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cashare/analysis.hpp"
#include "cashare/bbs.hpp"
#include "cashare/errors.hpp"
#include "cashare/image.hpp"
#include "cashare/scheme.hpp"
#include "cashare/share_format.hpp"

namespace cashare::cli {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        parts.push_back(item);
    }
    return parts;
}

std::vector<RuleNumber> parse_rules(const std::string& text) {
    std::vector<RuleNumber> rules;
    for (const auto& part : split_list(text)) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != part.size()) {
            throw ParamError("invalid rule number '" + part + "'");
        }
        if (v > RuleNumber::max_value) {
            throw ParamError("rule number " + part + " outside [0, 511]");
        }
        rules.emplace_back(static_cast<unsigned>(v));
    }
    return rules;
}

std::string join_rules(const std::vector<RuleNumber>& rules) {
    std::string out;
    for (std::size_t l = 0; l < rules.size(); ++l) {
        if (l) out += ",";
        out += std::to_string(rules[l].value());
    }
    return out;
}

BigInt parse_big(const std::string& text) {
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); })) {
        throw ParamError("expected a decimal integer, got '" + text + "'");
    }
    return BigInt(text);
}

BbsGenerator parse_bbs(const std::string& text) {
    const auto parts = split_list(text);
    if (parts.size() != 3) {
        throw ParamError("--bbs expects p,q,x0");
    }
    return BbsGenerator(parse_big(parts[0]), parse_big(parts[1]), parse_big(parts[2]));
}

const char* pnm_extension(unsigned depth) {
    switch (depth) {
        case 1: return ".pbm";
        case 8: return ".pgm";
        default: return ".ppm";
    }
}

Share load_share(const fs::path& path) { return decode_share(read_file_bytes(path)); }

// ---------------------------------------------------------------------------

struct SplitOptions {
    std::string input;
    std::string output_dir = ".";
    unsigned k = 0;
    unsigned n = 0;
    std::optional<unsigned> m;
    std::string rules;
    std::string bbs;
    unsigned prime_bits = 256;
    bool gray = false;
    bool also_pgm = false;
};

int cmd_split(const SplitOptions& o, std::ostream& out, std::ostream& err) {
    Image image = read_pnm_file(o.input);
    if (o.gray && image.depth() == PixelDepth::Color) {
        image = Image::gray_from_rgb(image.rows(), image.cols(), image.samples());
    }
    const CellMatrix secret = image_to_matrix(image);

    SystemEntropy system;
    std::unique_ptr<BbsGenerator> generator;
    if (!o.bbs.empty()) {
        generator = std::make_unique<BbsGenerator>(parse_bbs(o.bbs));
    } else {
        generator = std::make_unique<BbsGenerator>(BbsGenerator::generate(system, o.prime_bits));
    }
    // With --bbs every dealer choice comes from that generator, so runs repeat exactly.
    EntropySource& entropy = o.bbs.empty() ? static_cast<EntropySource&>(system) : *generator;

    SchemeParams params = o.rules.empty()
                              ? setup(o.k, o.n, o.m, image.bits(), image.rows(), image.cols(), entropy)
                              : setup_with_rules(o.k, o.n, o.m, image.bits(), image.rows(), image.cols(),
                                                 parse_rules(o.rules), entropy);
    if (std::all_of(params.rules.begin(), params.rules.end(), [](RuleNumber r) { return r.value() == 0; })) {
        err << "warning: every rule number is 0; shares are periodic copies of the initial configurations\n";
    }

    SplitTrace trace;
    const auto shares = split(secret, params, *generator, &trace);

    fs::create_directories(o.output_dir);
    out << "scheme id: " << to_hex(params.scheme_id) << "\n"
        << "k=" << params.order << " n=" << params.share_count << " m=" << params.offset << " depth=" << params.depth
        << " size=" << params.rows << "x" << params.cols << "\n"
        << "rules: " << join_rules(params.rules) << "\n"
        << "forward iterations: " << trace.forward_steps << "\n";
    for (std::size_t j = 0; j < shares.size(); ++j) {
        const auto name = "share_" + std::to_string(j) + ".cas";
        const auto path = fs::path(o.output_dir) / name;
        write_file_bytes(path, encode_share(shares[j]));
        if (o.also_pgm) {
            write_pnm_file(fs::path(o.output_dir) / ("share_" + std::to_string(j) + pnm_extension(params.depth)),
                           matrix_to_image(shares[j].payload, pixel_depth_from_bits(params.depth)));
        }
        out << path.string() << "  index " << shares[j].header.index << "\n";
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------

int cmd_recover(const std::vector<std::string>& inputs, const std::string& output, std::ostream& out) {
    std::vector<Share> shares;
    for (const auto& in : inputs) shares.push_back(load_share(in));

    RecoveryTrace trace;
    const auto secret = recover(shares, &trace);
    write_pnm_file(output, matrix_to_image(secret, pixel_depth_from_bits(secret.depth())));

    out << "alpha: " << trace.alpha << "\nshares used:";
    for (auto i : trace.used_indices) out << " " << i;
    out << "\n" << trace.inverse_steps << " inverse iterations\n"
        << "wrote " << output << "\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------

void print_header(const ShareHeader& h, std::ostream& out) {
    out << "depth: " << h.depth << "\n"
        << "k: " << h.order << "\n"
        << "n: " << h.share_count << "\n"
        << "m: " << h.offset << "\n"
        << "i: " << h.index << "\n"
        << "rows: " << h.rows << "\n"
        << "cols: " << h.cols << "\n"
        << "scheme id: " << to_hex(h.scheme_id) << "\n"
        << "rules: " << join_rules(h.rules) << "\n";
}

int cmd_inspect(const std::string& path, std::ostream& out, std::ostream& err) {
    const auto bytes = read_file_bytes(path);
    out << "file: " << path << "\n" << "size: " << bytes.size() << " bytes\n";
    try {
        const auto share = decode_share(bytes);
        out << "format: CAS1 version " << unsigned{share_format_version} << "\n";
        print_header(share.header, out);
        out << "participant: " << share.participant() << "\n"
            << "payload bytes: " << payload_byte_length(share.header.depth, share.header.rows, share.header.cols)
            << "\n"
            << "crc: ok\n";
        return exit_ok;
    } catch (const IntegrityError& e) {
        print_header(peek_share_header(bytes), out);
        out << "crc: MISMATCH\n";
        err << "error: " << e.what() << "\n";
        return exit_input_error;
    }
}

// ---------------------------------------------------------------------------

struct CensusOptions {
    bool enabled = false;
    std::size_t r = 1, s = 1;
    std::uint64_t c = 2;
    unsigned k = 2;
    std::optional<unsigned> m, n, j;
    std::string rules;
};

nlohmann::json stats_json(const UniformityStats& stats) {
    auto channels = nlohmann::json::array();
    for (const auto& c : stats.channels) {
        channels.push_back({{"chi_square", c.chi_square},
                            {"degrees_of_freedom", c.degrees_of_freedom},
                            {"p_value", c.p_value},
                            {"horizontal_correlation", c.horizontal_correlation},
                            {"vertical_correlation", c.vertical_correlation}});
    }
    return {{"channels", channels}, {"uniform_at_0.01", stats.uniform_at(0.01)}};
}

int cmd_analyze(const std::vector<std::string>& files, const CensusOptions& census, const std::string& json_path,
                std::ostream& out) {
    nlohmann::json doc;
    doc["files"] = nlohmann::json::array();

    for (const auto& path : files) {
        const auto share = load_share(path);
        const auto stats = uniformity_stats(share.payload);
        const double rate = information_rate(share, share.header.rows, share.header.cols, share.header.depth);
        out << path << " (i=" << share.header.index << ", " << share.header.rows << "x" << share.header.cols
            << ", depth " << share.header.depth << ")\n";
        out << "  channel  chi-square      dof  p-value   corr-h    corr-v\n";
        for (std::size_t ch = 0; ch < stats.channels.size(); ++ch) {
            const auto& c = stats.channels[ch];
            out << "  " << std::setw(7) << ch << "  " << std::setw(10) << std::fixed << std::setprecision(2)
                << c.chi_square << "  " << std::setw(7) << c.degrees_of_freedom << "  " << std::setprecision(4)
                << c.p_value << "  " << std::showpos << c.horizontal_correlation << "  " << c.vertical_correlation
                << std::noshowpos << "\n";
        }
        out << "  uniform at 0.01: " << (stats.uniform_at(0.01) ? "yes" : "no") << "\n"
            << "  information rate: " << std::setprecision(3) << rate << "\n";
        auto entry = stats_json(stats);
        entry["path"] = path;
        entry["information_rate"] = rate;
        doc["files"].push_back(entry);
    }

    if (census.enabled) {
        CensusParams p;
        p.rows = census.r;
        p.cols = census.s;
        p.modulus = census.c;
        p.order = census.k;
        p.offset = census.m.value_or(census.k);
        p.share_count = census.n.value_or(census.k);
        p.rules = census.rules.empty() ? std::vector<RuleNumber>(census.k - 1, RuleNumber(232))
                                       : parse_rules(census.rules);
        p.record_distributions = false;

        unsigned j_first = 1, j_last = census.k;
        if (census.j) j_first = j_last = *census.j;

        out << "census r=" << p.rows << " s=" << p.cols << " c=" << p.modulus << " k=" << p.order << " m=" << p.offset
            << " n=" << p.share_count << " rules=" << join_rules(p.rules) << "\n";
        auto jdoc = nlohmann::json::array();
        bool hidden = true;
        bool recoverable = true;
        for (unsigned j = j_first; j <= std::min(j_last, p.share_count); ++j) {
            p.observed = j;
            const auto report = perfectness_census(p);
            for (const auto& s : report.subsets) {
                out << "  j=" << j << " shares {";
                for (std::size_t q = 0; q < s.participants.size(); ++q) out << (q ? "," : "") << s.participants[q];
                const bool run = s.consecutive && s.participants.size() > 1;
                out << "}" << (run ? " consecutive" : "") << ": " << to_string(s.verdict)
                    << " (secrets per observation " << s.min_support << ".." << s.max_support << " of "
                    << report.secret_count << ")\n";
                jdoc.push_back({{"j", j},
                                {"participants", s.participants},
                                {"consecutive", s.consecutive},
                                {"verdict", to_string(s.verdict)},
                                {"min_support", s.min_support},
                                {"max_support", s.max_support}});
            }
            if (j < p.order) hidden = hidden && report.verdict == CensusVerdict::Perfect;
            if (j == p.order) recoverable = report.consecutive_determined();
        }
        if (j_first < p.order) {
            out << "verdict (fewer than k shares): " << (hidden ? "perfect" : "NOT perfect") << "\n";
        }
        if (j_last >= p.order) {
            out << "k consecutive shares determine the secret: " << (recoverable ? "yes" : "no") << "\n";
        }
        doc["census"] = {{"subsets", jdoc}, {"perfect", hidden}, {"consecutive_determined", recoverable}};
    }

    if (!json_path.empty()) {
        const auto text = doc.dump(2);
        write_file_bytes(json_path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    }
    return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Threshold secret sharing of images with reversible memory cellular automata", "cashare"};
    app.require_subcommand(1);

    SplitOptions split_opts;
    auto* split_cmd = app.add_subcommand("split", "Split a PBM/PGM/PPM image into n share files");
    split_cmd->add_option("input", split_opts.input, "Secret image (raw PBM, PGM or PPM)")->required();
    split_cmd->add_option("-o,--output", split_opts.output_dir, "Directory for share_<j>.cas files");
    split_cmd->add_option("--k", split_opts.k, "Threshold: consecutive shares needed")->required();
    split_cmd->add_option("--n", split_opts.n, "Number of shares")->required();
    split_cmd->add_option("--m", split_opts.m, "Time index of the first share (default k)");
    split_cmd->add_option("--rules", split_opts.rules, "Comma-separated k-1 rule numbers (default random)");
    split_cmd->add_option("--bbs", split_opts.bbs, "Fixed BBS parameters p,q,x0 for reproducible output");
    split_cmd->add_option("--prime-bits", split_opts.prime_bits, "Size of each random BBS prime");
    split_cmd->add_flag("--gray", split_opts.gray, "Treat a PPM with R=G=B as an 8-bit gray image");
    split_cmd->add_flag("--also-pgm", split_opts.also_pgm, "Also write each share payload as an image");

    std::vector<std::string> recover_inputs;
    std::string recover_output;
    auto* recover_cmd = app.add_subcommand("recover", "Recover the image from k consecutive shares");
    recover_cmd->add_option("shares", recover_inputs, "Share files")->required();
    recover_cmd->add_option("-o,--output", recover_output, "Recovered image path")->required();

    std::string inspect_input;
    auto* inspect_cmd = app.add_subcommand("inspect", "Print a share file's header and CRC status");
    inspect_cmd->add_option("share", inspect_input, "Share file")->required();

    std::vector<std::string> analyze_inputs;
    CensusOptions census;
    std::string json_path;
    auto* analyze_cmd = app.add_subcommand("analyze", "Share statistics and exhaustive perfectness census");
    analyze_cmd->add_option("shares", analyze_inputs, "Share files");
    analyze_cmd->add_flag("--census", census.enabled, "Run the exhaustive census on a tiny synthetic scheme");
    analyze_cmd->add_option("--r", census.r, "Census rows");
    analyze_cmd->add_option("--s", census.s, "Census cols");
    analyze_cmd->add_option("--c", census.c, "Census modulus (power of two)");
    analyze_cmd->add_option("--k", census.k, "Census order");
    analyze_cmd->add_option("--m", census.m, "Census offset (default k)");
    analyze_cmd->add_option("--n", census.n, "Census share count (default k)");
    analyze_cmd->add_option("--j", census.j, "Only subsets of this size (default 1..k)");
    analyze_cmd->add_option("--rules", census.rules, "Census rules (default 232 for each)");
    analyze_cmd->add_option("--json", json_path, "Also write a JSON report");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_input_error;
    }

    try {
        if (*split_cmd) return cmd_split(split_opts, out, err);
        if (*recover_cmd) return cmd_recover(recover_inputs, recover_output, out);
        if (*inspect_cmd) return cmd_inspect(inspect_input, out, err);
        return cmd_analyze(analyze_inputs, census, json_path, out);
    } catch (const ProtocolError& e) {
        err << "error: " << e.what() << "\n";
        return exit_protocol_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_input_error;
    }
}

}  // namespace cashare::cli
