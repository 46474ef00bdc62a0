#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace pdrc;

TEST_SUITE( "explicit" )
{
    TEST_CASE( "fig1 uncontrolled reachable set" )
    {
        const auto sys = generators::fig1();
        const auto r = oracle::reachable( sys );
        // Hand-stepped: l0, then a -> l2 (y=2) or b -> l1 (y=1); c increments x at l3.
        std::set< model::explicit_state > expected{ { { 0 }, { 0, 0 } }, { { 1 }, { 0, 1 } }, { { 2 }, { 0, 2 } } };
        for ( long x = 0; x <= 3; ++x )
        {
            expected.insert( { { 3 }, { x, 1 } } );
            expected.insert( { { 3 }, { x, 2 } } );
            if ( x > 0 )
            {
                expected.insert( { { 1 }, { x, 1 } } );
                expected.insert( { { 1 }, { x, 2 } } );
            }
            if ( x <= 2 )
                expected.insert( { { 4 }, { x, 2 } } );
        }
        expected.insert( { { 5 }, { 3, 2 } } );
        CHECK( r == expected );
    }

    TEST_CASE( "single state without transitions" )
    {
        model::system sys;
        sys.events = { { "e", true } };
        model::automaton a;
        a.name = "A";
        a.locations = { "l0" };
        a.initial = "l0";
        sys.automata.push_back( a );
        CHECK( oracle::reachable( sys ).size() == 1 );
        const auto rw = oracle::rw_synthesize( sys );
        CHECK( rw.unsafe.empty() );
    }

    TEST_CASE( "fig1 RW fixpoint" )
    {
        const auto sys = generators::fig1();
        const auto rw = oracle::rw_synthesize( sys );
        const std::set< model::explicit_state > bstar{ { { 5 }, { 3, 2 } }, { { 3 }, { 3, 2 } } };
        CHECK( rw.unsafe == bstar );
        const auto& ctrl = std::get< oracle::controller_map >( rw.outcome );
        const auto a = *sys.event_index( "a" );
        CHECK_FALSE( ctrl.enabled.at( { { 1 }, { 3, 2 } } ).count( a ) );
        CHECK( ctrl.enabled.at( { { 1 }, { 2, 2 } } ).count( a ) );
    }

    TEST_CASE( "no forbidden states enables everything" )
    {
        auto sys = generators::fig1();
        sys.automata[ 0 ].forbidden.clear();
        const auto rw = oracle::rw_synthesize( sys );
        CHECK( rw.unsafe.empty() );
        const auto& ctrl = std::get< oracle::controller_map >( rw.outcome );
        const model::semantics sem{ sys };
        for ( const auto& [ s, events ] : ctrl.enabled )
            for ( std::size_t e = 0; e < sys.events.size(); ++e )
                CHECK( events.count( e ) == ( sem.enabled( s, e ) ? 1u : 0u ) );
    }

    TEST_CASE( "forbidden initial state" )
    {
        auto sys = generators::fig1();
        sys.automata[ 0 ].forbidden = { "l0" };
        const auto rw = oracle::rw_synthesize( sys );
        const auto& path = std::get< oracle::uncontrollable_path >( rw.outcome );
        CHECK( path.events.empty() );
        CHECK( path.states.size() == 1 );
    }

    TEST_CASE( "oracle properties on random systems" )
    {
        for ( std::uint64_t seed = 0; seed < 200; ++seed )
        {
            const auto sys = testing::small_random( seed );
            const model::semantics sem{ sys };
            const auto rw = oracle::rw_synthesize( sys );
            const auto g = oracle::explore( sys );
            // B* is closed under uncontrollable predecessors.
            for ( const auto& e : g.edges )
                if ( !sys.events[ e.event ].controllable && rw.unsafe.count( g.states[ e.to ] ) )
                    CHECK( rw.unsafe.count( g.states[ e.from ] ) );
            if ( const auto* ctrl = std::get_if< oracle::controller_map >( &rw.outcome ) )
            {
                for ( const auto& [ s, events ] : ctrl->enabled )
                    for ( std::size_t e = 0; e < sys.events.size(); ++e )
                        if ( !sys.events[ e ].controllable && sem.enabled( s, e ) )
                            CHECK( events.count( e ) );
                // Monotone in the controller: allowing more never reaches less.
                const auto controlled = oracle::reachable( sys, ctrl->as_controller() );
                const auto all = oracle::reachable( sys );
                CHECK( std::includes( all.begin(), all.end(), controlled.begin(), controlled.end() ) );
                for ( const auto& s : controlled )
                    CHECK_FALSE( sem.forbidden( s ) );
            }
            else
            {
                const auto& path = std::get< oracle::uncontrollable_path >( rw.outcome );
                counterexample cex;
                cex.states = path.states;
                cex.events = path.events;
                CHECK( oracle::replays( sys, cex ) );
            }
        }
    }

    TEST_CASE( "limit" )
    {
        CHECK_THROWS_AS( oracle::reachable( generators::fig1(), {}, 5 ), oracle::limit_exceeded );
    }

    TEST_CASE( "adjacency dump" )
    {
        const auto sys = generators::fig1();
        std::ostringstream os;
        oracle::write_adjacency( sys, oracle::explore( sys ), os );
        const auto text = os.str();
        CHECK( std::count( text.begin(), text.end(), '\n' ) == static_cast< long >( oracle::explore( sys ).edges.size() ) );
        CHECK( text.find( "\talpha\t" ) != std::string::npos );
    }

    TEST_CASE( "replays rejects broken paths" )
    {
        const auto sys = generators::fig1();
        counterexample cex;
        cex.states = { model::initial_state( sys ) };
        CHECK_FALSE( oracle::replays( sys, cex ) );   // initial state is not forbidden
        cex.states.push_back( { { 1 }, { 0, 1 } } );
        cex.events.push_back( *sys.event_index( "b" ) );
        std::string why;
        CHECK_FALSE( oracle::replays( sys, cex, &why ) );
        CHECK( why.find( "not uncontrollable" ) != std::string::npos );
    }
}
