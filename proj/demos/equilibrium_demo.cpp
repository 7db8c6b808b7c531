// Lower-quota strategies in an LV-game: outcome, quota gap and stability.

#include <iostream>

#include "limvote/games.hpp"
#include "limvote/generators.hpp"

using namespace limvote;

int main() {
    // parties of 6, 4 and 4 candidates; 3, 2 and 2 voters; k = 10, l = 2
    std::vector<std::pair<CandSet, int>> groups{
        {{0, 1, 2, 3, 4, 5}, 3}, {{6, 7, 8, 9}, 2}, {{10, 11, 12, 13}, 2}};
    LVGame game = make_lv_game(make_frame(7, 14, 10, 2, Profile::from_groups(groups)));

    StrategyProfile lq;
    for (int i = 0; i < game.party_count(); ++i) lq.push_back(lq_strategy(game, i));

    auto outcome = game_outcome(game, lq);
    for (int i = 0; i < game.party_count(); ++i)
        std::cout << "party " << i + 1 << ": quota " << lower_quota(game, i) << ", seats "
                  << outcome.utilities[i] << "\n";

    int64_t gap = quota_gap(game);
    std::cout << "quota gap " << gap << "\n";
    std::cout << "Nash: " << (verify_equilibrium(game, lq, 0).holds ? "yes" : "no") << ", "
              << gap << "-Nash: " << (verify_equilibrium(game, lq, gap).holds ? "yes" : "no")
              << "\n";
    return 0;
}
