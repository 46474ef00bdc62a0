#pragma once

#include "pdrc/pdrc.hpp"
#include "pdrc/supervisor.hpp"

#include <functional>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

// Brute-force ground truth: explicit reachability and the classical
// maximally-permissive safe controller.
namespace pdrc::oracle
{

using model::explicit_state;

class limit_exceeded : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

constexpr std::size_t default_limit = 1'000'000;

// Whether `event` may fire in `state` (only consulted when the plant allows it).
using controller = std::function< bool( const explicit_state&, std::size_t ) >;

struct edge
{
    std::size_t from;
    std::size_t event;
    std::size_t to;
};

struct graph
{
    std::vector< explicit_state > states;   // BFS order, states[0] is initial
    std::unordered_map< explicit_state, std::size_t, model::explicit_state_hash > index;
    std::vector< edge > edges;
};

// Breadth-first exploration from the initial state. Throws limit_exceeded
// once more than `limit` states are discovered.
graph explore( const model::system& sys, const controller& ctrl = {}, std::size_t limit = default_limit );

std::set< explicit_state > reachable( const model::system& sys, const controller& ctrl = {},
                                      std::size_t limit = default_limit );

// State -> enabled events, over the uncontrolled reachable states.
struct controller_map
{
    std::map< explicit_state, std::set< std::size_t > > enabled;
    [[nodiscard]] controller as_controller() const;
};

struct uncontrollable_path
{
    std::vector< explicit_state > states;
    std::vector< std::size_t > events;
};

struct rw_result
{
    std::variant< controller_map, uncontrollable_path > outcome;
    std::set< explicit_state > unsafe;   // B* within the reachable states
};

rw_result rw_synthesize( const model::system& sys, std::size_t limit = default_limit );

// Controller induced by a bit-level supervisor on the system it was
// synthesised for.
controller supervised( const encoding::symbolic_system& sym, const supervisor& sup );

// Steps through a counterexample in the explicit model: starts in the initial
// state, takes only uncontrollable events, and ends in a forbidden state.
bool replays( const model::system& sys, const counterexample& cex, std::string* why = nullptr );

struct comparison
{
    bool verdicts_agree = false;
    bool reachable_equal = true;
    bool safe = true;
    bool counterexample_replays = true;
    std::vector< std::string > findings;

    [[nodiscard]] bool ok() const { return verdicts_agree && reachable_equal && safe && counterexample_replays; }
};

comparison compare( const encoding::symbolic_system& sym, const synthesis_result& pdrc_result, const rw_result& oracle,
                    std::size_t limit = default_limit );

// Per strengthening: true when it never blocks a transition of the original
// plant from a state reachable in the controlled system.
std::vector< bool > redundant_strengthenings( const model::system& original, const extraction& ex,
                                              std::size_t limit = default_limit );

// One `state TAB event TAB state` line per edge.
void write_adjacency( const model::system& sys, const graph& g, std::ostream& out );

} // namespace pdrc::oracle
