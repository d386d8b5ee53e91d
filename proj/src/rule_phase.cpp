#include "pcmci/orientation.hpp"

namespace pcmci {

TimeSeriesGraph rule_phase(TimeSeriesGraph g) {
    while (true) {
        int changed = 0;

        std::vector<std::pair<int, int>> r1;
        for (const TriplePattern& pat : g.enumerate_triples(TripleKind::R1)) {
            if (g.is_ambiguous(pat.triple)) continue;
            r1.emplace_back(pat.triple.middle.var, pat.triple.right.var);
        }
        changed += apply_proposals(g, r1);

        std::vector<std::pair<int, int>> r2;
        for (const TriplePattern& pat : g.enumerate_triples(TripleKind::R2)) {
            r2.emplace_back(pat.triple.left.var, pat.triple.right.var);
        }
        changed += apply_proposals(g, r2);

        std::vector<std::pair<int, int>> r3;
        for (const TriplePattern& pat : g.enumerate_triples(TripleKind::R3)) {
            const Triple side{pat.triple.middle, pat.triple.left, pat.partner->middle};
            if (g.is_ambiguous(side)) continue;
            r3.emplace_back(pat.triple.left.var, pat.triple.right.var);
        }
        changed += apply_proposals(g, r3);

        if (changed == 0) break;
    }
    return g;
}

}  // namespace pcmci
