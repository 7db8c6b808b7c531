// Builds a small election where the ballot limit hurts diversity and prints
// the scores behind the improvement ratios.

#include <iostream>

#include "limvote/generators.hpp"
#include "limvote/metrics.hpp"

using namespace limvote;

int main() {
    // three parties of four, three and two supporters; k = 8, l = 3
    auto pl = gen_party_list({8, 3, 3}, {4, 3, 2}, 8, 3);
    const Election& e = pl.election;

    Committee lv = make_resolute(lv_winners(e), TieBreakPolicy::lex());
    Committee av = make_resolute(av_winners(e.frame), TieBreakPolicy::lex());
    std::cout << "LV covers " << cc_score(e.frame, lv) << " of " << e.frame.n << " voters, "
              << "AV covers " << cc_score(e.frame, av) << "\n";

    auto rep = cc_improvement(e);
    std::cout << "CC-improvement " << to_fraction(rep.value) << " = " << to_decimal(rep.value)
              << "\n";

    auto cf = closed_form_cc_improvement_bpl(pl.structure, e.frame.m, 8, 3);
    std::cout << "closed form " << to_fraction(cf.value)
              << (cf.quarantined ? " (quarantined)" : "") << "\n";
    return 0;
}
