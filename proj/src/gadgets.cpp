#include "dpcr/gadgets.hpp"

#include <stdexcept>

namespace dpcr {

InnerProductInstance InnerProductInstance::random(int d, int m,
                                                  RandomSource rng) {
    if (d < 1 || m < 1)
        throw std::invalid_argument("InnerProductInstance: d, m must be >= 1");
    InnerProductInstance ip;
    ip.d = d;
    ip.m = m;
    ip.x.resize(d);
    for (int i = 0; i < d; ++i) ip.x[i] = static_cast<uint8_t>(rng.next_u64() & 1);
    ip.q.assign(m, std::vector<uint8_t>(d));
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < d; ++i)
            ip.q[j][i] = static_cast<uint8_t>(rng.next_u64() & 1);
    return ip;
}

int64_t InnerProductInstance::inner(int j) const {
    if (j < 0 || j >= m) throw std::invalid_argument("inner: round out of range");
    int64_t s = 0;
    for (int i = 0; i < d; ++i) s += x[i] & q[j][i];
    return s;
}

void InnerProductInstance::validate() const {
    if (d < 1 || m < 1)
        throw std::invalid_argument("InnerProductInstance: d, m must be >= 1");
    if (static_cast<int>(x.size()) != d)
        throw std::invalid_argument("InnerProductInstance: |x| != d");
    if (static_cast<int>(q.size()) != m)
        throw std::invalid_argument("InnerProductInstance: |q| != m");
    for (const auto& row : q)
        if (static_cast<int>(row.size()) != d)
            throw std::invalid_argument("InnerProductInstance: |q^j| != d");
}

int64_t GadgetInstance::expected(const QueryPoint& qp) const {
    int64_t base = 0;
    switch (kind) {
        case GadgetKind::Matching:
            base = static_cast<int64_t>(qp.j) * ip.d;
            break;
        case GadgetKind::KCore:
            base = 2 * static_cast<int64_t>(qp.j) * ip.d;
            break;
        case GadgetKind::DegHist:
            base = 0;
            break;
    }
    return base + (qp.post ? ip.inner(qp.j - 1) : 0);
}

namespace {

struct StreamBuilder {
    UpdateStream s;
    void edge(int u, int v) { s.updates.push_back(Update::insert_edge(u, v)); }
    void bot() { s.updates.push_back(Update::noop()); }
    void pad_to(size_t len) {
        while (s.updates.size() < len) bot();
    }
    int64_t step() const { return static_cast<int64_t>(s.updates.size()); }
};

}  // namespace

GadgetInstance build_matching_gadget(const InnerProductInstance& ip) {
    ip.validate();
    const int d = ip.d, m = ip.m;
    // layers j = 0..m hold U^j and V^j of size d each, plus a final U^{m+1}
    auto u = [d](int j, int i) { return j * 2 * d + i; };
    auto v = [d](int j, int i) { return j * 2 * d + d + i; };

    GadgetInstance g;
    g.kind = GadgetKind::Matching;
    g.ip = ip;
    StreamBuilder b;
    b.s.kind = StreamKind::Graph;
    b.s.universe = d * (2 * (m + 1) + 1);

    for (int i = 0; i < d; ++i) b.edge(v(0, i), u(1, i));  // seed matching
    for (int i = 0; i < d; ++i) {
        if (ip.x[i])
            b.edge(u(0, i), v(0, i));  // dataset edge e_i
        else
            b.bot();
    }
    for (int j = 1; j <= m; ++j) {
        g.timetable.push_back({b.step(), j, false, QueryKind::MatchingSize, 0});
        size_t mark = b.s.updates.size();
        for (int i = 0; i < d; ++i)
            if (ip.q[j - 1][i]) b.edge(u(j, i), v(j, i));  // probe S^j
        b.pad_to(mark + d);
        g.timetable.push_back({b.step(), j, true, QueryKind::MatchingSize, 0});
        mark = b.s.updates.size();
        for (int i = 0; i < d; ++i) b.edge(v(j, i), u(j + 1, i));  // top-up T^j
        for (int i = 0; i < d; ++i)
            if (!ip.q[j - 1][i]) b.edge(u(j, i), v(j, i));
        b.pad_to(mark + 2 * d);
    }
    b.s.horizon = b.step();
    b.s.validate();
    g.stream = std::move(b.s);
    return g;
}

GadgetInstance build_kcore_gadget(const InnerProductInstance& ip) {
    ip.validate();
    const int d = ip.d, m = ip.m;
    if (d == 1 && m > 1)
        throw std::invalid_argument(
            "kcore gadget: degree certificate fails for d=1 with more than one "
            "round (probe vertices reach the target core degree)");
    const int vtx = 0;  // designated vertex
    auto uu = [](int i) { return 1 + i; };
    auto vv = [d](int j, int i) { return 1 + d + j * 2 * d + i; };
    auto ww = [d](int j, int i) { return 1 + d + j * 2 * d + d + i; };

    GadgetInstance g;
    g.kind = GadgetKind::KCore;
    g.ip = ip;
    g.designated_vertex = vtx;
    StreamBuilder b;
    b.s.kind = StreamKind::Graph;
    b.s.universe = 1 + d + 2 * d * (m + 1);

    // clique on every V^j u W^j
    int cl0 = 1 + d;
    int cln = 2 * d * (m + 1);
    for (int a = 0; a < cln; ++a)
        for (int c = a + 1; c < cln; ++c) b.edge(cl0 + a, cl0 + c);
    for (int i = 0; i < d; ++i) b.edge(vtx, vv(0, i));  // star to V^0, W^0
    for (int i = 0; i < d; ++i) b.edge(vtx, ww(0, i));
    for (int i = 0; i < d; ++i)  // bipartite U x V^0
        for (int c = 0; c < d; ++c) b.edge(uu(i), vv(0, c));

    for (int i = 0; i < d; ++i) {
        if (ip.x[i])
            b.edge(vtx, uu(i));  // dataset edge e_i
        else
            b.bot();
    }
    for (int j = 1; j <= m; ++j) {
        g.timetable.push_back({b.step(), j, false, QueryKind::CoreOfVertex, vtx});
        size_t mark = b.s.updates.size();
        for (int i = 0; i < d; ++i)
            if (ip.q[j - 1][i]) {  // probe: attach u_i to W^{j-1} u V^j
                for (int c = 0; c < d; ++c) b.edge(uu(i), ww(j - 1, c));
                for (int c = 0; c < d; ++c) b.edge(uu(i), vv(j, c));
            }
        b.pad_to(mark + static_cast<size_t>(2 * d) * d);
        g.timetable.push_back({b.step(), j, true, QueryKind::CoreOfVertex, vtx});
        mark = b.s.updates.size();
        for (int i = 0; i < d; ++i)
            if (!ip.q[j - 1][i]) {  // top-up: the remaining U attachments
                for (int c = 0; c < d; ++c) b.edge(uu(i), ww(j - 1, c));
                for (int c = 0; c < d; ++c) b.edge(uu(i), vv(j, c));
            }
        for (int c = 0; c < d; ++c) b.edge(vtx, vv(j, c));
        for (int c = 0; c < d; ++c) b.edge(vtx, ww(j, c));
        b.pad_to(mark + static_cast<size_t>(2 * d) * d + 2 * d);
    }
    b.s.horizon = b.step();
    b.s.validate();
    g.stream = std::move(b.s);
    return g;
}

GadgetInstance build_deghist_gadget(const InnerProductInstance& ip) {
    ip.validate();
    const int d = ip.d, m = ip.m;
    if (m < d - 3)
        throw std::invalid_argument("deghist gadget: needs m >= d - 3");
    // U: m-d+3, V: d, W: d, X: m, Y: 3
    int U0 = 0, V0 = m - d + 3, W0 = V0 + d, X0 = W0 + d, Y0 = X0 + m;
    auto xx = [X0](int j) { return X0 + j; };

    GadgetInstance g;
    g.kind = GadgetKind::DegHist;
    g.ip = ip;
    StreamBuilder b;
    b.s.kind = StreamKind::Graph;
    b.s.universe = Y0 + 3;

    for (int a = U0; a < W0; ++a)  // clique on U u V
        for (int c = a + 1; c < W0; ++c) b.edge(a, c);
    for (int a = X0; a < Y0 + 3; ++a)  // clique on X u Y
        for (int c = a + 1; c < Y0 + 3; ++c) b.edge(a, c);

    for (int i = 0; i < d; ++i) {
        if (ip.x[i])
            b.edge(V0 + i, W0 + i);  // dataset edge e_i
        else
            b.bot();
    }
    for (int j = 1; j <= m; ++j) {
        g.timetable.push_back({b.step(), j, false, QueryKind::DegreeCount, j + 1});
        size_t mark = b.s.updates.size();
        for (int i = 0; i < d; ++i)
            if (ip.q[j - 1][i]) b.edge(W0 + i, xx(j - 1));  // probe S^j
        b.pad_to(mark + d);
        g.timetable.push_back({b.step(), j, true, QueryKind::DegreeCount, j + 1});
        mark = b.s.updates.size();
        for (int i = 0; i < d; ++i)
            if (!ip.q[j - 1][i]) b.edge(W0 + i, xx(j - 1));  // top-up T^j
        b.pad_to(mark + d);
    }
    b.s.horizon = b.step();
    b.s.validate();
    g.stream = std::move(b.s);
    return g;
}

GadgetInstance build_gadget(GadgetKind kind, const InnerProductInstance& ip) {
    switch (kind) {
        case GadgetKind::Matching:
            return build_matching_gadget(ip);
        case GadgetKind::KCore:
            return build_kcore_gadget(ip);
        case GadgetKind::DegHist:
            return build_deghist_gadget(ip);
    }
    throw std::logic_error("build_gadget: bad kind");
}

TopKReductionInstance build_topk_reduction(const InnerProductInstance& ip) {
    ip.validate();
    const int d = ip.d, m = ip.m;
    TopKReductionInstance r;
    r.ip = ip;
    r.stream.kind = StreamKind::Elements;
    r.stream.universe = d;
    auto push = [&](bool present, int i) {
        r.stream.updates.push_back(present ? Update::insert(i) : Update::noop());
    };
    for (int i = 0; i < d; ++i) push(ip.x[i], i);  // dataset
    for (int j = 1; j <= m; ++j) {
        for (int i = 0; i < d; ++i) push(ip.q[j - 1][i], i);  // query bits
        r.query_steps.push_back(static_cast<int64_t>(r.stream.updates.size()));
        // re-level so element i sits at frequency j + x_i for the next round
        for (int i = 0; i < d; ++i) push(!ip.q[j - 1][i], i);
    }
    r.stream.horizon = static_cast<int64_t>(r.stream.updates.size());
    r.stream.validate();
    return r;
}

int decode_topk(const std::vector<double>& prefix_estimates, int round_j,
                double alpha) {
    int n = static_cast<int>(prefix_estimates.size());
    for (int k = 1; k <= n; ++k) {
        double line = static_cast<double>(round_j + 1) * k - alpha;
        if (prefix_estimates[k - 1] < line) return k;
    }
    return n + 1;  // flagged: every prefix sat on the slope line
}

}  // namespace dpcr
