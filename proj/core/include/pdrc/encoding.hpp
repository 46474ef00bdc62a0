#pragma once

#include "pdrc/model.hpp"
#include "pdrc/sat.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pdrc::encoding
{

using sat::clause;
using sat::cube;
using sat::lit;

class capacity_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class malformed_assignment : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class contract_violation : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

struct bit_block
{
    std::uint32_t first = 0;
    std::uint32_t size = 0;

    [[nodiscard]] sat::var bit( std::uint32_t i ) const { return first + i; }
    [[nodiscard]] bool contains( sat::var v ) const { return v >= first && v < first + size; }
};

// Either a literal or a constant, for threshold atoms at the domain edges.
using threshold = std::variant< bool, lit >;

// Layout of the state bits. Current-state bits occupy [0, state_bits); the
// primed partner of bit b is b + state_bits. Gate and activation variables
// come after both blocks.
//
//   locations: one one-hot block per automaton
//   variables: one unary block of width (max - min) per variable, where bit i
//              means "value >= min + i + 1"
//   events:    one one-hot block (the event the state is about to take)
class bit_map
{
public:
    std::vector< bit_block > locations;
    std::vector< bit_block > variables;
    bit_block events;
    std::uint32_t state_bits = 0;

    std::vector< long > var_min;
    std::vector< long > var_max;

    [[nodiscard]] lit location( std::size_t automaton, std::size_t loc ) const;
    [[nodiscard]] lit event( std::size_t event ) const;
    // "variable >= value".
    [[nodiscard]] threshold at_least( std::size_t variable, long value ) const;

    [[nodiscard]] sat::var prime( sat::var v ) const { return v + state_bits; }
    [[nodiscard]] lit prime( lit l ) const { return lit{ prime( l.variable() ), l.is_negative() }; }
    [[nodiscard]] sat::var unprime( sat::var v ) const { return v - state_bits; }
    [[nodiscard]] bool is_current( sat::var v ) const { return v < state_bits; }
    [[nodiscard]] bool is_next( sat::var v ) const { return v >= state_bits && v < 2 * state_bits; }

    [[nodiscard]] cube prime( const cube& c ) const;
    [[nodiscard]] clause prime( const clause& c ) const;

    enum class bit_kind
    {
        location,
        variable,
        event,
    };
    struct bit_info
    {
        bit_kind kind;
        std::size_t owner;   // automaton, variable or 0 for events
        std::size_t index;   // location, unary position or event
    };
    [[nodiscard]] bit_info describe( sat::var current_bit ) const;
};

struct symbolic_system
{
    model::system source;
    bit_map map;
    std::uint32_t num_vars = 0;
    lit constant_true;

    // I: units over current bits (the event is left free).
    std::vector< clause > init;
    // One-hot exactness and unary monotonicity over current bits. The event
    // part is kept apart so primed event bits can stay a free choice.
    std::vector< clause > state_invariant;
    std::vector< clause > event_invariant;

    // Definitions of the property and enabledness roots, plus the constant.
    std::vector< clause > definitions;
    lit safe;       // safe -> P
    lit bad;        // bad -> not P
    lit not_enabled_u;  // -> no uncontrollable transition enabled in this state
    lit ind_any;    // ind_any -> ind_c or ind_u

    // Transition cones. ind_c -> T_c(X, X'), ind_u -> T_u(X, X'). The two
    // cones share no gate variables.
    std::vector< clause > trans_c;
    std::vector< clause > trans_u;
    lit ind_c;
    lit ind_u;

    std::vector< bool > controllable;  // per event

    [[nodiscard]] std::vector< clause > primed( const std::vector< clause >& cs ) const;
    [[nodiscard]] std::vector< clause > invariant() const;

    // Loads every definition, both cones, and the encoding invariant on the
    // current and next state bits.
    void load( sat::solver& s ) const;
};

struct encode_options
{
    std::uint32_t max_state_bits = 1u << 20;
};

// Throws capacity_error when the state bit count exceeds the limit and
// model::model_error when the system does not validate.
symbolic_system encode( const model::system& sys, const encode_options& options = {} );

// Full valuation of the current-state bits.
std::vector< bool > encode_state( const bit_map& map, const model::explicit_state& s,
                                  std::optional< std::size_t > event = std::nullopt );

// Positive one-hot literals plus every unary bit: together with the encoding
// invariant this pins exactly one state (and event, when given).
cube state_cube( const bit_map& map, const model::explicit_state& s, std::optional< std::size_t > event = std::nullopt );

struct decoded_state
{
    model::explicit_state state;
    std::optional< std::size_t > event;
};

// `bits` indexes current-state bits. Throws malformed_assignment on a broken
// one-hot or unary block.
decoded_state decode_state( const bit_map& map, const std::vector< bool >& bits );

bool satisfies( const std::vector< bool >& bits, const cube& c );
bool satisfies( const std::vector< bool >& bits, const clause& c );
bool satisfies( const std::vector< bool >& bits, const std::vector< clause >& cs );

// Model-level reading of a cube over current-state bits.
struct predicate
{
    std::vector< std::pair< std::size_t, std::size_t > > locations;           // (automaton, location)
    std::vector< std::pair< std::size_t, std::size_t > > excluded_locations;  // negative location literals
    std::optional< std::size_t > event;
    std::vector< std::size_t > excluded_events;

    struct interval
    {
        std::size_t variable;
        long lo;
        long hi;
    };
    // Only variables the cube constrains, ascending.
    std::vector< interval > intervals;
    // Conjunction of the intervals as threshold atoms.
    model::guard condition;
};

// Throws contract_violation when the cube mentions non-current bits.
predicate cube_to_predicate( const symbolic_system& sym, const cube& c );

// Model-level names of current-state literals, stable across encoder layouts:
// `A@l`, `event=e`, `x>=k`, each optionally prefixed with `!`.
std::string literal_name( const symbolic_system& sym, lit l );
// Inverse of literal_name. Threshold atoms at or beyond the domain edges fold
// to a constant.
std::variant< bool, lit > parse_literal( const symbolic_system& sym, std::string_view name );
std::string cube_text( const symbolic_system& sym, const cube& c );

} // namespace pdrc::encoding
