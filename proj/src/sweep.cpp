#include "unram2/sweep.hpp"

#include <omp.h>

#include <stdexcept>

namespace unram2 {

namespace {

struct Partial {
    std::vector<Rat> sums;  // one per moment line, values in this segment
    std::array<long long, 3> bucket_counts{0, 0, 0};
    std::vector<std::array<Rat, 3>> bucket_sums;  // per line, per checkpoint bucket
    std::map<Rat, long long> hist;
};

struct Plan {
    std::vector<PairCounter> counters;
    std::vector<Int> cpow_base;               // c per pair
    std::vector<std::vector<int>> line_ks;    // exponent vector per line
    std::vector<std::string> line_labels;
    bool distribution = false;
};

Plan make_plan(const SweepConfig& cfg) {
    if (cfg.pairs.empty()) throw std::invalid_argument("sweep: no pairs");
    Plan plan;
    plan.distribution = cfg.distribution;
    for (const auto& s : cfg.pairs) plan.counters.push_back(PairCounter::make(s));
    for (const auto& pcnt : plan.counters) plan.cpow_base.push_back(pcnt.c);
    if (cfg.pairs.size() == 1) {
        std::vector<int> ks = cfg.ks.empty() ? std::vector<int>{1} : cfg.ks;
        for (int k : ks) {
            plan.line_ks.push_back({k});
            plan.line_labels.push_back("k=" + std::to_string(k));
        }
    } else {
        std::vector<int> ks = cfg.ks;
        if (ks.empty()) ks.assign(cfg.pairs.size(), 1);
        if (ks.size() != cfg.pairs.size())
            throw std::invalid_argument("sweep: ks must match the pair list");
        plan.line_ks.push_back(ks);
        std::string label = "product";
        plan.line_labels.push_back(label);
    }
    return plan;
}

// value of prod_i (f_i/c_i^omega)^(k_i) at one discriminant
Rat line_value(const std::vector<int>& ks, const std::vector<Rat>& fvals) {
    Rat acc = 1;
    for (size_t i = 0; i < ks.size(); i++)
        for (int e = 0; e < ks[i]; e++) acc *= fvals[i];
    return acc;
}

void process_segment(const Plan& plan, const SweepConfig& cfg,
                     const FundamentalSieve& sieve, int seg, Partial& out) {
    out.sums.assign(plan.line_ks.size(), Rat(0));
    out.bucket_sums.assign(plan.line_ks.size(), {Rat(0), Rat(0), Rat(0)});
    SieveRange range{cfg.sign, cfg.xmax, cfg.alpha};
    i64 q1 = cfg.xmax / 4, q2 = cfg.xmax / 2;
    std::vector<Rat> fvals(plan.counters.size());
    sieve.run_segment(seg, range, [&](const DiscFactorization& fact) {
        i64 ad = fact.d < 0 ? -fact.d : fact.d;
        int bucket = ad <= q1 ? 0 : (ad <= q2 ? 1 : 2);
        out.bucket_counts[bucket]++;
        for (size_t i = 0; i < plan.counters.size(); i++) {
            CountResult r = f_total(plan.counters[i], fact);
            Int cpow = 1;
            for (int w = 0; w < fact.omega; w++) cpow *= plan.cpow_base[i];
            fvals[i] = r.value / cpow;
        }
        for (size_t li = 0; li < plan.line_ks.size(); li++) {
            Rat v = line_value(plan.line_ks[li], fvals);
            out.bucket_sums[li][bucket] += v;
        }
        if (plan.distribution) out.hist[fvals[0]]++;
    });
}

SweepReport reduce(const Plan& plan, const SweepConfig& cfg,
                   std::vector<Partial>& parts) {
    SweepReport rep;
    rep.cfg = cfg;
    size_t nlines = plan.line_ks.size();
    std::vector<std::array<Rat, 3>> sums(nlines, {Rat(0), Rat(0), Rat(0)});
    std::array<long long, 3> counts{0, 0, 0};
    for (auto& p : parts) {
        for (int b = 0; b < 3; b++) counts[b] += p.bucket_counts[b];
        for (size_t li = 0; li < nlines; li++)
            for (int b = 0; b < 3; b++) sums[li][b] += p.bucket_sums[li][b];
        for (auto& [v, c] : p.hist) rep.histogram[v] += c;
    }
    long long c1 = counts[0], c2 = counts[0] + counts[1],
              c3 = counts[0] + counts[1] + counts[2];
    rep.count = c3;
    rep.checkpoint_counts = {c1, c2, c3};

    std::vector<PairPredict> preds;
    for (const auto& s : cfg.pairs) preds.push_back(pair_predict(s));

    for (size_t li = 0; li < nlines; li++) {
        MomentLine line;
        line.label = plan.line_labels[li];
        line.ks = plan.line_ks[li];
        Rat s1 = sums[li][0];
        Rat s2 = s1 + sums[li][1];
        Rat s3 = s2 + sums[li][2];
        line.checkpoints = {c1 ? s1 / c1 : Rat(0), c2 ? s2 / c2 : Rat(0),
                            c3 ? s3 / c3 : Rat(0)};
        line.empirical = line.checkpoints[2];
        std::vector<PairPredict> expanded;
        for (size_t i = 0; i < preds.size(); i++)
            for (int e = 0; e < plan.line_ks[li][i]; e++) expanded.push_back(preds[i]);
        line.predicted = correlation_prediction(expanded, cfg.sign);
        if (line.predicted != 0)
            line.rel_gap = std::abs(rat_to_double(line.empirical / line.predicted - 1));
        rep.moments.push_back(std::move(line));
    }

    if (plan.distribution) {
        const auto& p0 = preds[0];
        if (p0.bipartite) {
            auto bd = bipartite_distribution(p0, cfg.sign, 12);
            rep.support_points = bd.support;
            rep.support_counts.assign(bd.support.size(), 0);
            long long on = 0;
            for (size_t i = 0; i < bd.support.size(); i++) {
                auto it = rep.histogram.find(bd.support[i]);
                if (it != rep.histogram.end()) {
                    rep.support_counts[i] = it->second;
                    on += it->second;
                }
            }
            rep.off_support = rep.count - on;
        } else {
            Rat pm = point_mass(p0, cfg.sign);
            rep.support_points = {pm};
            rep.support_counts = {0};
            auto it = rep.histogram.find(pm);
            if (it != rep.histogram.end()) rep.support_counts[0] = it->second;
            rep.off_support = rep.count - rep.support_counts[0];
        }
    }
    return rep;
}

SweepReport run_sweep(const SweepConfig& cfg, bool parallel) {
    Plan plan = make_plan(cfg);
    FundamentalSieve sieve(cfg.xmax < 3 ? 3 : cfg.xmax);
    int nseg = sieve.num_segments();
    std::vector<Partial> parts(nseg);
    if (parallel) {
        int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (int s = 0; s < nseg; s++) process_segment(plan, cfg, sieve, s, parts[s]);
    } else {
        for (int s = 0; s < nseg; s++) process_segment(plan, cfg, sieve, s, parts[s]);
    }
    return reduce(plan, cfg, parts);
}

}  // namespace

SweepReport sweep_moments(const SweepConfig& cfg) {
    SweepConfig c = cfg;
    c.distribution = false;
    return run_sweep(c, true);
}

SweepReport sweep_moments_serial(const SweepConfig& cfg) {
    SweepConfig c = cfg;
    c.distribution = false;
    return run_sweep(c, false);
}

SweepReport sweep_distribution(const SweepConfig& cfg) {
    SweepConfig c = cfg;
    c.distribution = true;
    if (c.pairs.size() != 1)
        throw std::invalid_argument("sweep_distribution: exactly one pair");
    return run_sweep(c, true);
}

SweepReport sweep_distribution_serial(const SweepConfig& cfg) {
    SweepConfig c = cfg;
    c.distribution = true;
    if (c.pairs.size() != 1)
        throw std::invalid_argument("sweep_distribution: exactly one pair");
    return run_sweep(c, false);
}

nlohmann::ordered_json SweepReport::to_json() const {
    nlohmann::ordered_json j;
    j["sign"] = cfg.sign < 0 ? "neg" : "pos";
    j["xmax"] = cfg.xmax;
    j["alpha"] = cfg.alpha;
    j["pairs"] = cfg.pair_names;
    j["count"] = count;
    j["checkpoint_counts"] = checkpoint_counts;
    nlohmann::ordered_json jm = nlohmann::ordered_json::array();
    for (const auto& m : moments) {
        nlohmann::ordered_json line;
        line["label"] = m.label;
        line["ks"] = m.ks;
        line["empirical"] = rat_str(m.empirical);
        line["empirical_float"] = rat_to_double(m.empirical);
        line["predicted"] = rat_str(m.predicted);
        line["rel_gap"] = m.rel_gap;
        nlohmann::ordered_json cps = nlohmann::ordered_json::array();
        for (const auto& c : m.checkpoints) cps.push_back(rat_str(c));
        line["checkpoints"] = cps;
        jm.push_back(line);
    }
    j["moments"] = jm;
    if (!histogram.empty()) {
        nlohmann::ordered_json jh = nlohmann::ordered_json::array();
        for (const auto& [v, c] : histogram) {
            nlohmann::ordered_json e;
            e["value"] = rat_str(v);
            e["count"] = c;
            jh.push_back(e);
        }
        j["histogram"] = jh;
        nlohmann::ordered_json js = nlohmann::ordered_json::array();
        for (size_t i = 0; i < support_points.size(); i++) {
            nlohmann::ordered_json e;
            e["value"] = rat_str(support_points[i]);
            e["count"] = support_counts[i];
            js.push_back(e);
        }
        j["support"] = js;
        j["off_support_count"] = off_support;
    }
    return j;
}

}  // namespace unram2
