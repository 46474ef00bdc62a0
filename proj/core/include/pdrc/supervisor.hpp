#pragma once

#include "pdrc/pdrc.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pdrc
{

class extraction_error : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

struct guard_strengthening
{
    std::string automaton;
    std::size_t transition;   // index within the automaton
    std::string from;
    std::string event;
    model::guard added;
    std::size_t frame;
};

struct extraction
{
    model::system controlled;
    std::vector< guard_strengthening > strengthenings;
};

// Writes every supervisor cube into the guards of the transitions it selects.
// The host automaton is the first participant of the cube's event that has a
// location literal in the cube (else the first participant); location
// literals of other automata become location atoms in the added guard.
extraction extract_guards( const encoding::symbolic_system& sym, const supervisor& sup );

// Negation of a cube as a disjunction of threshold and location atoms.
model::guard negated_condition( const encoding::symbolic_system& sym, const encoding::predicate& p,
                                std::optional< std::size_t > host = std::nullopt );

struct certificate_verdict
{
    struct check
    {
        std::string name;
        bool passed = false;
        std::string witness;   // a violating state when the check fails
    };
    std::vector< check > checks;   // initiation, consecution, safety

    [[nodiscard]] bool passed() const;
};

// Runs I -> Inv, Inv and T^S -> Inv', Inv -> P on a fresh solver. The
// supervised relation is the system's own T_c strengthened by `sup`.
certificate_verdict check_certificate( const encoding::symbolic_system& sym, const std::vector< clause >& invariant,
                                       const supervisor& sup = {} );

} // namespace pdrc
