#include "dpcr/core.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dpcr {

void PrivacyBudget::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (!(delta >= 0.0 && delta < 1.0))
        throw std::invalid_argument("delta must lie in [0,1)");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("beta must lie in (0,1)");
}

uint64_t RandomSource::next_below(uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below(0)");
    // rejection sampling keeps the draw exactly uniform
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
        v = eng_();
    } while (v >= limit);
    return v % n;
}

RandomSource RandomSource::child(uint64_t index) const {
    // splitmix64 on (seed, index); decouples child streams from parent draws
    uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return RandomSource(z);
}

double laplace_inverse_cdf(double u, double scale) {
    if (!(u > 0.0 && u < 1.0))
        throw std::invalid_argument("laplace_inverse_cdf: u must be in (0,1)");
    if (!(scale > 0.0))
        throw std::invalid_argument("laplace_inverse_cdf: scale must be > 0");
    double x = u - 0.5;
    if (x == 0.0) return 0.0;
    double s = x > 0 ? 1.0 : -1.0;
    return -scale * s * std::log(1.0 - 2.0 * std::abs(x));
}

double sample_laplace(double scale, RandomSource& rng, NoiseMode mode) {
    if (mode == NoiseMode::Off) return 0.0;
    return laplace_inverse_cdf(rng.next_uniform(), scale);
}

void UpdateStream::validate() const {
    if (horizon < 0) throw std::invalid_argument("stream horizon is negative");
    if (universe <= 0 && !updates.empty())
        throw std::invalid_argument("stream universe must be positive");
    if (static_cast<int64_t>(updates.size()) > horizon)
        throw std::invalid_argument("stream has more updates than its horizon");
    for (size_t i = 0; i < updates.size(); ++i) {
        const Update& u = updates[i];
        std::string where = "update " + std::to_string(i + 1) + ": ";
        switch (u.kind) {
            case Update::Kind::Noop:
                break;
            case Update::Kind::InsertElement:
            case Update::Kind::DeleteElement:
                if (kind != StreamKind::Elements)
                    throw std::invalid_argument(where +
                                                "element update in graph stream");
                if (u.a < 0 || u.a >= universe)
                    throw std::invalid_argument(where + "element id out of range");
                break;
            case Update::Kind::InsertEdge:
            case Update::Kind::DeleteEdge:
                if (kind != StreamKind::Graph)
                    throw std::invalid_argument(where +
                                                "edge update in element stream");
                if (u.a < 0 || u.a >= universe || u.b < 0 || u.b >= universe)
                    throw std::invalid_argument(where + "vertex id out of range");
                if (u.a == u.b)
                    throw std::invalid_argument(where + "self loop");
                break;
        }
    }
}

std::vector<int64_t> prefix_frequencies(const UpdateStream& s, int64_t t) {
    if (s.kind != StreamKind::Elements)
        throw std::invalid_argument("prefix_frequencies: element streams only");
    if (t < 0 || t > static_cast<int64_t>(s.updates.size()))
        throw std::invalid_argument("prefix_frequencies: t out of range");
    std::vector<int64_t> f(s.universe, 0);
    for (int64_t i = 0; i < t; ++i) {
        const Update& u = s.updates[i];
        if (u.kind == Update::Kind::InsertElement) {
            f[u.a] += 1;
        } else if (u.kind == Update::Kind::DeleteElement) {
            if (f[u.a] > 0) f[u.a] -= 1;
        }
    }
    return f;
}

namespace {

[[noreturn]] void bad_line(size_t lineno, const std::string& why) {
    throw std::invalid_argument("stream file line " + std::to_string(lineno) +
                                ": " + why);
}

bool parse_int(const std::string& tok, int64_t& out) {
    if (tok.empty()) return false;
    size_t pos = 0;
    try {
        out = std::stoll(tok, &pos);
    } catch (...) {
        return false;
    }
    return pos == tok.size();
}

}  // namespace

UpdateStream read_stream(std::istream& in) {
    UpdateStream s;
    std::string line;
    size_t lineno = 0;

    if (!std::getline(in, line)) bad_line(1, "missing header");
    ++lineno;
    {
        std::istringstream hs(line);
        std::string tt, hh, kk;
        if (!(hs >> tt >> hh >> kk)) bad_line(lineno, "malformed header");
        std::string extra;
        if (hs >> extra) bad_line(lineno, "trailing tokens in header");
        if (tt.rfind("T=", 0) != 0 || hh.rfind("h=", 0) != 0 ||
            kk.rfind("kind=", 0) != 0)
            bad_line(lineno, "header must be 'T=<int> h=<int> kind=<...>'");
        if (!parse_int(tt.substr(2), s.horizon))
            bad_line(lineno, "bad T value");
        if (!parse_int(hh.substr(2), s.universe))
            bad_line(lineno, "bad h value");
        std::string kind = kk.substr(5);
        if (kind == "elements")
            s.kind = StreamKind::Elements;
        else if (kind == "graph")
            s.kind = StreamKind::Graph;
        else
            bad_line(lineno, "kind must be 'elements' or 'graph'");
    }

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string op;
        ls >> op;
        if (op == "bot") {
            std::string extra;
            if (ls >> extra) bad_line(lineno, "trailing tokens after bot");
            s.updates.push_back(Update::noop());
            continue;
        }
        if (op != "+" && op != "-") bad_line(lineno, "unknown operation '" + op + "'");
        std::vector<int64_t> ids;
        std::string tok;
        while (ls >> tok) {
            int64_t v;
            if (!parse_int(tok, v)) bad_line(lineno, "bad id '" + tok + "'");
            ids.push_back(v);
        }
        bool ins = (op == "+");
        if (s.kind == StreamKind::Elements) {
            if (ids.size() != 1) bad_line(lineno, "element update needs one id");
            s.updates.push_back(ins ? Update::insert(ids[0])
                                    : Update::erase(ids[0]));
        } else {
            if (ids.size() != 2) bad_line(lineno, "edge update needs two ids");
            s.updates.push_back(ins ? Update::insert_edge(ids[0], ids[1])
                                    : Update::erase_edge(ids[0], ids[1]));
        }
    }
    s.validate();
    return s;
}

UpdateStream read_stream_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open stream file " + path);
    return read_stream(in);
}

void write_stream(std::ostream& out, const UpdateStream& s) {
    out << "T=" << s.horizon << " h=" << s.universe << " kind="
        << (s.kind == StreamKind::Elements ? "elements" : "graph") << "\n";
    for (const Update& u : s.updates) {
        switch (u.kind) {
            case Update::Kind::Noop:
                out << "bot\n";
                break;
            case Update::Kind::InsertElement:
                out << "+ " << u.a << "\n";
                break;
            case Update::Kind::DeleteElement:
                out << "- " << u.a << "\n";
                break;
            case Update::Kind::InsertEdge:
                out << "+ " << u.a << " " << u.b << "\n";
                break;
            case Update::Kind::DeleteEdge:
                out << "- " << u.a << " " << u.b << "\n";
                break;
        }
    }
}

void write_stream_file(const std::string& path, const UpdateStream& s) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write stream file " + path);
    write_stream(out, s);
}

}  // namespace dpcr
