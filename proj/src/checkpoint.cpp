#include "primepat/checkpoint.hpp"

#include <cfloat>
#include <cmath>
#include <fstream>
#include <sstream>

namespace primepat {
namespace {

constexpr std::string_view kMagic = "PRIMEPAT-CHECKPOINT v1";

struct ExactFloat {
    WideSigned mantissa;
    int exponent;
};

ExactFloat split(long double v) {
    if (v == 0) return {0, 0};
    int e = 0;
    const long double m = std::frexp(v, &e);
    const long double scaled = std::ldexp(m, LDBL_MANT_DIG);
    return {static_cast<WideSigned>(scaled), e - LDBL_MANT_DIG};
}

long double join(WideSigned mantissa, int exponent) {
    return std::ldexp(static_cast<long double>(mantissa), exponent);
}

[[noreturn]] void corrupt(std::size_t line_no, const std::string& why) {
    throw CheckpointError("checkpoint line " + std::to_string(line_no) + ": " + why);
}

std::uint64_t to_u64(const std::string& text, std::size_t line_no) {
    try {
        const WideInt v = parse_wide(text);
        if (v > ~std::uint64_t{0}) corrupt(line_no, "value out of range: " + text);
        return static_cast<std::uint64_t>(v);
    } catch (const std::invalid_argument&) {
        corrupt(line_no, "expected an integer, got '" + text + "'");
    }
}

WideInt to_wide(const std::string& text, std::size_t line_no) {
    try {
        return parse_wide(text);
    } catch (const std::invalid_argument&) {
        corrupt(line_no, "expected an integer, got '" + text + "'");
    }
}

WideSigned to_signed(const std::string& text, std::size_t line_no) {
    try {
        return parse_signed_wide(text);
    } catch (const std::invalid_argument&) {
        corrupt(line_no, "expected an integer, got '" + text + "'");
    }
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string serialize_checkpoint(const Checkpoint& cp) {
    std::ostringstream out;
    out << kMagic << '\n';
    out << "digest " << cp.digest << '\n';
    out << "pattern " << cp.pattern << '\n';
    out << "n " << to_string(cp.n) << '\n';
    out << "workers " << cp.workers << '\n';
    out << "residues " << to_string(cp.residues) << '\n';
    for (const StripeState& s : cp.stripes) {
        out << "stripe: " << s.index << " position " << to_string(s.position) << " done " << (s.done ? 1 : 0)
            << " residues_done " << s.residues_done << " found " << s.found << " cursor";
        for (std::uint64_t d : s.cursor) out << ' ' << d;
        out << '\n';
        for (std::size_t b = 0; b < s.sums.size(); ++b) {
            const KahanAccumulator& acc = s.sums[b];
            if (acc.sum() == 0 && acc.compensation() == 0) continue;
            const ExactFloat sum = split(acc.sum());
            const ExactFloat comp = split(acc.compensation());
            out << "sum " << s.index << ' ' << b << ' ' << to_string(sum.mantissa) << ' ' << sum.exponent << ' '
                << to_string(comp.mantissa) << ' ' << comp.exponent << '\n';
        }
        for (std::size_t i = 0; i < s.hits.size(); i += 16) {
            out << "hits " << s.index;
            for (std::size_t k = i; k < s.hits.size() && k < i + 16; ++k) out << ' ' << to_string(s.hits[k]);
            out << '\n';
        }
    }
    std::string body = out.str();
    body += "end " + std::to_string(fnv1a64(body)) + "\n";
    return body;
}

Checkpoint parse_checkpoint(const std::string& text) {
    const std::size_t end_pos = text.rfind("end ");
    if (end_pos == std::string::npos || (end_pos != 0 && text[end_pos - 1] != '\n'))
        throw CheckpointError("checkpoint is truncated (no end record)");
    {
        std::istringstream trailer(text.substr(end_pos + 4));
        std::uint64_t stored = 0;
        if (!(trailer >> stored) || stored != fnv1a64(std::string_view(text).substr(0, end_pos)))
            throw CheckpointError("checkpoint checksum mismatch");
    }

    std::istringstream in(text.substr(0, end_pos));
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&](std::string_view key) -> std::istringstream {
        if (!std::getline(in, line)) corrupt(line_no + 1, "missing '" + std::string(key) + "' record");
        ++line_no;
        std::istringstream fields(line);
        std::string head;
        fields >> head;
        if (head != key) corrupt(line_no, "expected '" + std::string(key) + "', got '" + head + "'");
        return fields;
    };

    if (!std::getline(in, line) || line != kMagic) throw CheckpointError("not a primepat checkpoint (bad header)");
    ++line_no;
    Checkpoint cp;
    std::string word;
    {
        auto f = next_line("digest");
        f >> word;
        cp.digest = to_u64(word, line_no);
    }
    {
        auto f = next_line("pattern");
        f >> cp.pattern;
    }
    {
        auto f = next_line("n");
        f >> word;
        cp.n = to_wide(word, line_no);
    }
    {
        auto f = next_line("workers");
        f >> word;
        cp.workers = to_u64(word, line_no);
    }
    {
        auto f = next_line("residues");
        f >> word;
        cp.residues = to_wide(word, line_no);
    }

    StripeState* current = nullptr;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream f(line);
        std::string head;
        f >> head;
        if (head == "stripe:") {
            StripeState s;
            std::string key, value;
            f >> value;
            s.index = to_u64(value, line_no);
            while (f >> key) {
                if (key == "cursor") {
                    while (f >> value) s.cursor.push_back(to_u64(value, line_no));
                    break;
                }
                if (!(f >> value)) corrupt(line_no, "missing value for '" + key + "'");
                if (key == "position") s.position = to_wide(value, line_no);
                else if (key == "done") s.done = to_u64(value, line_no) != 0;
                else if (key == "residues_done") s.residues_done = to_u64(value, line_no);
                else if (key == "found") s.found = to_u64(value, line_no);
                else corrupt(line_no, "unknown stripe field '" + key + "'");
            }
            if (s.index != cp.stripes.size()) corrupt(line_no, "stripes out of order");
            cp.stripes.push_back(std::move(s));
            current = &cp.stripes.back();
        } else if (head == "sum" || head == "hits") {
            std::string value;
            f >> value;
            if (current == nullptr || to_u64(value, line_no) != current->index)
                corrupt(line_no, "'" + head + "' record outside its stripe");
            if (head == "sum") {
                std::string b, sm, se, cm, ce;
                if (!(f >> b >> sm >> se >> cm >> ce)) corrupt(line_no, "short sum record");
                const std::uint64_t bucket = to_u64(b, line_no);
                if (bucket >= current->sums.size()) corrupt(line_no, "bucket index out of range");
                current->sums[bucket] =
                    KahanAccumulator(join(to_signed(sm, line_no), static_cast<int>(to_signed(se, line_no))),
                                     join(to_signed(cm, line_no), static_cast<int>(to_signed(ce, line_no))));
            } else {
                while (f >> value) current->hits.push_back(to_wide(value, line_no));
            }
        } else {
            corrupt(line_no, "unknown record '" + head + "'");
        }
    }
    if (cp.stripes.size() != cp.workers) throw CheckpointError("checkpoint has the wrong number of stripes");
    return cp;
}

void save_checkpoint(const Checkpoint& cp, const std::filesystem::path& path) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CheckpointError("cannot write checkpoint " + tmp.string());
        out << serialize_checkpoint(cp);
        out.flush();
        if (!out) throw CheckpointError("failed writing checkpoint " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_checkpoint(buffer.str());
}

}  // namespace primepat
