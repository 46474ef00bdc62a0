#pragma once

#include "pdrc/model.hpp"

#include <cstdint>
#include <stdexcept>

namespace pdrc::generators
{

class parameter_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Single automaton `plant` over x, y in [0,3]; locations l0..l5 with l5
// forbidden; a, b, c controllable, alpha and omega uncontrollable.
model::system fig1();

// n philosophers `phil<i>` and n forks `fork<j>`. Philosopher i takes fork i
// on the left (tl<i>), counts c<i> up to k (step<i>), takes fork i+1 on the
// right (tr<i>), eats and releases both (rel<i>). Even philosophers also own
// the uncontrollable grab<i>, which fires when fork i is held and leads to the
// forbidden location `crash`. Requires n >= 2, k >= 1.
model::system edp( int n, int k );

// One automaton with occupancy counters cat_<f>_<r>, mouse_<f>_<r> in [0,k]
// over n floors of five rooms. Controllable moves only enter rooms free of
// the other species; the cat door 1->3 and the mouse door 3->1 on every floor
// are uncontrollable and unguarded. Stairs join room 4 of floor f with room 0
// of floor f+1. Cats start in room 0 of floor 0, mice in room 4 of the top
// floor; a room holding both is forbidden. Requires n >= 1, k >= 1.
model::system cmt( int n, int k );

struct random_bounds
{
    int max_automata = 3;
    int max_locations = 4;
    int max_variables = 2;
    int max_domain = 4;       // values per variable
    int max_events = 8;
    double uncontrollable_probability = 0.3;
    int max_forbidden = 2;
};

// Small random network that validates by construction: each event's variable
// updates belong to one automaton, and same-source same-event transitions
// split on a threshold of one variable.
model::system random_system( std::uint64_t seed, const random_bounds& bounds = {} );

} // namespace pdrc::generators
