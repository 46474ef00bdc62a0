#include "pdrc/explicit.hpp"

#include <algorithm>
#include <deque>
#include <ostream>

namespace pdrc::oracle
{

graph explore( const model::system& sys, const controller& ctrl, std::size_t limit )
{
    const model::semantics sem{ sys };
    graph g;
    auto visit = [ & ]( const explicit_state& s ) {
        auto [ it, fresh ] = g.index.try_emplace( s, g.states.size() );
        if ( fresh )
        {
            if ( g.states.size() >= limit )
                throw limit_exceeded( "more than " + std::to_string( limit ) + " reachable states" );
            g.states.push_back( s );
        }
        return it->second;
    };
    visit( model::initial_state( sys ) );
    for ( std::size_t i = 0; i < g.states.size(); ++i )
    {
        for ( std::size_t e = 0; e < sys.events.size(); ++e )
        {
            const auto here = g.states[ i ];
            const auto next = sem.enabled( here, e );
            if ( !next )
                continue;
            if ( ctrl && sys.events[ e ].controllable && !ctrl( here, e ) )
                continue;
            const auto j = visit( *next );
            g.edges.push_back( { i, e, j } );
        }
    }
    return g;
}

std::set< explicit_state > reachable( const model::system& sys, const controller& ctrl, std::size_t limit )
{
    const auto g = explore( sys, ctrl, limit );
    return { g.states.begin(), g.states.end() };
}

controller controller_map::as_controller() const
{
    return [ this ]( const explicit_state& s, std::size_t e ) {
        const auto it = enabled.find( s );
        return it != enabled.end() && it->second.count( e ) > 0;
    };
}

rw_result rw_synthesize( const model::system& sys, std::size_t limit )
{
    const model::semantics sem{ sys };
    const auto g = explore( sys, {}, limit );
    const auto n = g.states.size();

    std::vector< std::vector< edge > > incoming_u( n );
    for ( const auto& e : g.edges )
        if ( !sys.events[ e.event ].controllable )
            incoming_u[ e.to ].push_back( e );

    // B*: forbidden states closed backwards under uncontrollable edges.
    std::vector< bool > bad( n );
    std::deque< std::size_t > work;
    for ( std::size_t i = 0; i < n; ++i )
        if ( sem.forbidden( g.states[ i ] ) )
        {
            bad[ i ] = true;
            work.push_back( i );
        }
    while ( !work.empty() )
    {
        const auto i = work.front();
        work.pop_front();
        for ( const auto& e : incoming_u[ i ] )
            if ( !bad[ e.from ] )
            {
                bad[ e.from ] = true;
                work.push_back( e.from );
            }
    }

    rw_result out;
    for ( std::size_t i = 0; i < n; ++i )
        if ( bad[ i ] )
            out.unsafe.insert( g.states[ i ] );

    if ( bad[ 0 ] )
    {
        // Shortest uncontrollable path from the initial state to a forbidden one.
        std::vector< std::optional< edge > > parent( n );
        std::vector< bool > seen( n );
        std::vector< std::vector< edge > > outgoing_u( n );
        for ( const auto& e : g.edges )
            if ( !sys.events[ e.event ].controllable )
                outgoing_u[ e.from ].push_back( e );
        std::deque< std::size_t > q{ 0 };
        seen[ 0 ] = true;
        std::optional< std::size_t > hit;
        while ( !q.empty() && !hit )
        {
            const auto i = q.front();
            q.pop_front();
            if ( sem.forbidden( g.states[ i ] ) )
            {
                hit = i;
                break;
            }
            for ( const auto& e : outgoing_u[ i ] )
                if ( !seen[ e.to ] )
                {
                    seen[ e.to ] = true;
                    parent[ e.to ] = e;
                    q.push_back( e.to );
                }
        }
        uncontrollable_path path;
        for ( auto i = *hit; ; )
        {
            path.states.insert( path.states.begin(), g.states[ i ] );
            if ( !parent[ i ] )
                break;
            path.events.insert( path.events.begin(), parent[ i ]->event );
            i = parent[ i ]->from;
        }
        out.outcome = std::move( path );
        return out;
    }

    controller_map ctrl;
    for ( std::size_t i = 0; i < n; ++i )
        ctrl.enabled[ g.states[ i ] ];
    for ( const auto& e : g.edges )
        if ( !sys.events[ e.event ].controllable || !bad[ e.to ] )
            ctrl.enabled[ g.states[ e.from ] ].insert( e.event );
    out.outcome = std::move( ctrl );
    return out;
}

controller supervised( const encoding::symbolic_system& sym, const supervisor& sup )
{
    return [ &sym, &sup ]( const explicit_state& s, std::size_t e ) {
        if ( !sym.source.events[ e ].controllable )
            return true;
        return !disabled_by( sup, encoding::encode_state( sym.map, s, e ) );
    };
}

bool replays( const model::system& sys, const counterexample& cex, std::string* why )
{
    auto fail = [ & ]( std::string msg ) {
        if ( why )
            *why = std::move( msg );
        return false;
    };
    const model::semantics sem{ sys };
    if ( cex.states.empty() )
        return fail( "empty counterexample" );
    if ( cex.states.front() != model::initial_state( sys ) )
        return fail( "does not start in the initial state" );
    if ( cex.events.size() + 1 != cex.states.size() )
        return fail( "event count does not match state count" );
    for ( std::size_t i = 0; i < cex.events.size(); ++i )
    {
        const auto e = cex.events[ i ];
        if ( e >= sys.events.size() || sys.events[ e ].controllable )
            return fail( "step " + std::to_string( i ) + " is not uncontrollable" );
        const auto next = sem.enabled( cex.states[ i ], e );
        if ( !next || *next != cex.states[ i + 1 ] )
            return fail( "step " + std::to_string( i ) + " does not replay" );
    }
    if ( !sem.forbidden( cex.states.back() ) )
        return fail( "does not end in a forbidden state" );
    return true;
}

comparison compare( const encoding::symbolic_system& sym, const synthesis_result& pdrc_result, const rw_result& oracle,
                    std::size_t limit )
{
    const auto& sys = sym.source;
    const model::semantics sem{ sys };
    comparison out;
    const bool oracle_controlled = std::holds_alternative< controller_map >( oracle.outcome );

    if ( const auto* c = std::get_if< controlled >( &pdrc_result ) )
    {
        out.verdicts_agree = oracle_controlled;
        if ( !oracle_controlled )
        {
            out.findings.push_back( "verdict mismatch: pdrc controlled, oracle uncontrollable" );
            return out;
        }
        const auto mine = reachable( sys, supervised( sym, c->sup ), limit );
        const auto& map = std::get< controller_map >( oracle.outcome );
        const auto theirs = reachable( sys, map.as_controller(), limit );
        out.reachable_equal = mine == theirs;
        if ( !out.reachable_equal )
            out.findings.push_back( "controlled reachable sets differ: pdrc " + std::to_string( mine.size() ) +
                                    " states, oracle " + std::to_string( theirs.size() ) );
        for ( const auto* set : { &mine, &theirs } )
            for ( const auto& s : *set )
                if ( sem.forbidden( s ) )
                {
                    out.safe = false;
                    out.findings.push_back( "forbidden state reachable: " + model::to_string( sys, s ) );
                    break;
                }
    }
    else if ( const auto* u = std::get_if< uncontrollable >( &pdrc_result ) )
    {
        out.verdicts_agree = !oracle_controlled;
        if ( oracle_controlled )
            out.findings.push_back( "verdict mismatch: pdrc uncontrollable, oracle controlled" );
        std::string why;
        out.counterexample_replays = replays( sys, u->path, &why );
        if ( !out.counterexample_replays )
            out.findings.push_back( "counterexample does not replay: " + why );
    }
    else
    {
        out.verdicts_agree = false;
        out.findings.push_back( "pdrc inconclusive: " + std::get< inconclusive >( pdrc_result ).reason );
    }
    return out;
}

std::vector< bool > redundant_strengthenings( const model::system& original, const extraction& ex, std::size_t limit )
{
    const model::semantics sem{ original };
    const auto g = explore( ex.controlled, {}, limit );
    std::vector< bool > out( ex.strengthenings.size(), true );
    for ( std::size_t i = 0; i < out.size(); ++i )
    {
        const auto& st = ex.strengthenings[ i ];
        const auto a = original.automaton_index( st.automaton );
        const auto e = original.event_index( st.event );
        if ( !a || !e )
            continue;
        for ( const auto& q : g.states )
        {
            const auto fired = sem.firings( q, *e );
            if ( !fired )
                continue;
            const bool taken = std::any_of( fired->begin(), fired->end(), [ & ]( const auto& f ) {
                return f.automaton == *a && f.transition == st.transition;
            } );
            if ( taken && !sem.holds( st.added, q ) )
            {
                out[ i ] = false;
                break;
            }
        }
    }
    return out;
}

void write_adjacency( const model::system& sys, const graph& g, std::ostream& out )
{
    for ( const auto& e : g.edges )
        out << model::to_string( sys, g.states[ e.from ] ) << '\t' << sys.events[ e.event ].name << '\t'
            << model::to_string( sys, g.states[ e.to ] ) << '\n';
}

} // namespace pdrc::oracle
