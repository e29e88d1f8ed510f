#include "primepat/primality.hpp"

namespace primepat {

// L_p for odd p, each value listed once at the least p attaining it.
// Regenerate with `primepat pseudosquares --limit 1e14`.
const PseudosquareTable& PseudosquareTable::embedded() {
    static const PseudosquareTable table({
        {3, 73},
        {5, 241},
        {7, 1009},
        {11, 2641},
        {13, 8089},
        {17, 18001},
        {19, 53881},
        {23, 87481},
        {29, 117049},
        {31, 515761},
        {37, 1083289},
        {41, 3206641},
        {43, 3818929},
        {47, 9257329},
        {53, 22000801},
        {59, 48473881},
        {67, 175244281},
        {71, 427733329},
        {79, 898716289},
        {83, 2805544681},
        {101, 10310263441},
        {103, 23616331489},
        {107, 85157610409},
        {113, 196265095009},
        {131, 2871842842801},
        {149, 26250887023729},
    });
    return table;
}

}  // namespace primepat
