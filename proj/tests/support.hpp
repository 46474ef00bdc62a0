#pragma once

// Brute-force helpers shared by the unit and acceptance tests. Everything
// here works on explicit states and bit vectors, never on the solver.

#include "pdrc/encoding.hpp"
#include "pdrc/explicit.hpp"
#include "pdrc/generators.hpp"
#include "pdrc/model.hpp"
#include "pdrc/sat.hpp"

#include <optional>
#include <set>
#include <span>
#include <tuple>
#include <vector>

namespace pdrc::testing
{

using model::explicit_state;

struct state_event
{
    explicit_state state;
    std::size_t event;
    auto operator<=>( const state_event& ) const = default;
};

// Every in-domain (state, event) pair.
inline std::vector< state_event > all_pairs( const model::system& sys )
{
    std::vector< state_event > out;
    model::semantics{ sys }.for_each_state( [ & ]( const explicit_state& s ) {
        for ( std::size_t e = 0; e < sys.events.size(); ++e )
            out.push_back( { s, e } );
    } );
    return out;
}

inline std::vector< bool > bits_of( const encoding::symbolic_system& sym, const state_event& p )
{
    return encoding::encode_state( sym.map, p.state, p.event );
}

// Pairs whose bit valuation satisfies the cube.
inline std::vector< state_event > states_in( const encoding::symbolic_system& sym, const sat::cube& c )
{
    std::vector< state_event > out;
    for ( auto& p : all_pairs( sym.source ) )
        if ( encoding::satisfies( bits_of( sym, p ), c ) )
            out.push_back( std::move( p ) );
    return out;
}

// Random systems with a reachable state space small enough to enumerate.
inline model::system small_random( std::uint64_t seed )
{
    return generators::random_system( seed );
}

// Explicit reachable set of an EFSM with every controllable event allowed.
inline std::set< explicit_state > reach( const model::system& sys )
{
    return oracle::reachable( sys );
}

// Exact successor relation of the encoding for one (state, event) pair,
// enumerated by repeated solving with blocking clauses over primed bits.
inline std::vector< model::explicit_state > symbolic_successors( sat::solver& s, const encoding::symbolic_system& sym,
                                                          const state_event& p )
{
    std::vector< model::explicit_state > out;
    const auto n = sym.map.state_bits;
    auto cube = encoding::state_cube( sym.map, p.state, p.event ).lits;
    // Primed event bits are free; pin them to the first event to count states only.
    std::vector< sat::lit > assumptions = cube;
    assumptions.push_back( sym.ind_any );
    if ( !sym.map.events.size )
        return out;
    assumptions.push_back( sym.map.prime( sym.map.event( 0 ) ) );
    std::vector< sat::lit > blockers;
    while ( true )
    {
        auto as = assumptions;
        as.insert( as.end(), blockers.begin(), blockers.end() );
        if ( s.solve( std::span< const lit >{ as } ) != sat::status::satisfiable )
            break;
        std::vector< bool > bits( n );
        for ( sat::var b = 0; b < n; ++b )
            bits[ b ] = s.model_value( b + n );
        out.push_back( encoding::decode_state( sym.map, bits ).state );
        // Exclude this successor for the remainder via a fresh activation literal.
        const auto act = sat::lit::positive( s.new_var() );
        std::vector< sat::lit > block{ ~act };
        for ( sat::var b = 0; b < n; ++b )
            block.push_back( lit{ b + n, bits[ b ] } );
        s.add_clause( std::span< const lit >{ block } );
        blockers.push_back( act );
        if ( out.size() > 4 )
            break;
    }
    return out;
}


} // namespace pdrc::testing
