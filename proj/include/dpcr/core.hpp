#pragma once
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace dpcr {

enum class NoiseMode { Standard, Off };

// Privacy parameters shared by every mechanism. delta = 0 selects the pure-DP
// noise scales throughout.
struct PrivacyBudget {
    double epsilon = 1.0;
    double delta = 0.0;
    double beta = 0.05;  // failure probability for accuracy statements
    NoiseMode noise_mode = NoiseMode::Standard;

    void validate() const;
};

// Deterministic seeded randomness. Same seed => bit-identical draws on every
// platform (mt19937_64 plus explicit bit manipulation, no libc distributions).
class RandomSource {
public:
    explicit RandomSource(uint64_t seed) : eng_(seed), seed_(seed) {}

    uint64_t seed() const { return seed_; }
    uint64_t next_u64() { return eng_(); }

    // uniform in the open interval (0,1)
    double next_uniform() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53;
    }

    // uniform in [lo, hi)
    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(eng_() >> 11) * 0x1p-53);
    }

    // uniform integer in [0, n)
    uint64_t next_below(uint64_t n);

    // independent child stream, stable under unrelated draws from the parent
    RandomSource child(uint64_t index) const;

private:
    std::mt19937_64 eng_;
    uint64_t seed_;
};

// Laplace(0, scale) via inverse CDF; u must lie in (0,1). u = 1/2 maps to 0.
double laplace_inverse_cdf(double u, double scale);

// One Laplace draw honoring the noise mode: Off returns exactly 0 and
// consumes no randomness.
double sample_laplace(double scale, RandomSource& rng,
                      NoiseMode mode = NoiseMode::Standard);

// ---------------------------------------------------------------------------
// Update streams

enum class StreamKind { Elements, Graph };

struct Update {
    enum class Kind : uint8_t {
        InsertElement,
        DeleteElement,
        InsertEdge,
        DeleteEdge,
        Noop  // the "bot" step: time advances, nothing changes
    };
    Kind kind = Kind::Noop;
    int64_t a = 0;  // element id, or edge endpoint u
    int64_t b = 0;  // edge endpoint v

    static Update insert(int64_t i) { return {Kind::InsertElement, i, 0}; }
    static Update erase(int64_t i) { return {Kind::DeleteElement, i, 0}; }
    static Update insert_edge(int64_t u, int64_t v) {
        return {Kind::InsertEdge, u, v};
    }
    static Update erase_edge(int64_t u, int64_t v) {
        return {Kind::DeleteEdge, u, v};
    }
    static Update noop() { return {}; }

    bool operator==(const Update& o) const {
        return kind == o.kind && a == o.a && b == o.b;
    }
};

struct UpdateStream {
    StreamKind kind = StreamKind::Elements;
    int64_t horizon = 0;   // T: declared number of steps
    int64_t universe = 0;  // h: number of elements, or number of vertices
    std::vector<Update> updates;

    // Throws std::invalid_argument when ids are out of range, the update
    // kinds do not match `kind`, or more steps than `horizon` are present.
    void validate() const;
};

// Frequency vector f^t after the first t updates of an element stream.
// Frequencies are floored at zero (deleting an absent element is a no-op
// counted against nothing).
std::vector<int64_t> prefix_frequencies(const UpdateStream& s, int64_t t);

// Plain text stream files.
//   header:  T=<int> h=<int> kind=<elements|graph>
//   lines:   "+ <i>", "- <i>", "+ <u> <v>", "- <u> <v>", "bot"
// Malformed input throws std::invalid_argument naming the line number.
UpdateStream read_stream(std::istream& in);
UpdateStream read_stream_file(const std::string& path);
void write_stream(std::ostream& out, const UpdateStream& s);
void write_stream_file(const std::string& path, const UpdateStream& s);

}  // namespace dpcr
