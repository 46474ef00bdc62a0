#include "support.hpp"

#include <doctest.h>

using namespace pdrc;
using model::cmp_op;
using model::guard;

namespace
{

model::explicit_state fig1_state( int loc, long x, long y ) { return { { loc }, { x, y } }; }

bool has_kind( const std::vector< model::diagnostic >& ds, model::diagnostic::kind k )
{
    return std::any_of( ds.begin(), ds.end(), [ & ]( const auto& d ) { return d.what == k; } );
}

} // namespace

TEST_SUITE( "model" )
{
    TEST_CASE( "fig1 validates" )
    {
        CHECK( model::validate( generators::fig1() ).empty() );
    }

    TEST_CASE( "initial location outside the location list" )
    {
        auto sys = generators::fig1();
        sys.automata[ 0 ].initial = "nowhere";
        CHECK( model::validate( sys ).size() == 1 );
    }

    TEST_CASE( "overlapping same-event guards are nondeterministic" )
    {
        model::system sys;
        sys.variables = { { "x", 0, 3, 0 } };
        sys.events = { { "a", true } };
        model::automaton a;
        a.name = "A";
        a.locations = { "l0", "l1" };
        a.initial = "l0";
        a.transitions = { { "l0", "a", "l1", guard::compare( "x", cmp_op::lt, 2 ), {} },
                          { "l0", "a", "l0", guard::compare( "x", cmp_op::gt, 0 ), {} } };
        sys.automata.push_back( a );
        const auto ds = model::validate( sys );
        CHECK( has_kind( ds, model::diagnostic::kind::nondeterminism ) );

        // Brute-force confirmation: the overlap is exactly x = 1.
        const model::semantics sem{ sys };
        int overlaps = 0;
        for ( long x = 0; x <= 3; ++x )
        {
            const model::explicit_state s{ { 0 }, { x } };
            if ( sem.holds( a.transitions[ 0 ].condition, s ) && sem.holds( a.transitions[ 1 ].condition, s ) )
                ++overlaps;
        }
        CHECK( overlaps == 1 );

        sys.automata[ 0 ].transitions[ 1 ].condition = guard::compare( "x", cmp_op::ge, 2 );
        CHECK( model::validate( sys ).empty() );
    }

    TEST_CASE( "other diagnostics" )
    {
        auto sys = generators::fig1();
        sys.variables[ 0 ].init = 9;
        CHECK( has_kind( model::validate( sys ), model::diagnostic::kind::domain ) );

        sys = generators::fig1();
        sys.automata[ 0 ].transitions[ 0 ].event = "zeta";
        CHECK( has_kind( model::validate( sys ), model::diagnostic::kind::reference ) );

        sys = generators::fig1();
        sys.variables.push_back( sys.variables[ 0 ] );
        CHECK( has_kind( model::validate( sys ), model::diagnostic::kind::declaration ) );

        sys = generators::fig1();
        sys.automata[ 0 ].transitions[ 0 ].updates.push_back( model::update::assign( "y", 0 ) );
        CHECK( has_kind( model::validate( sys ), model::diagnostic::kind::update ) );
    }

    TEST_CASE( "validate is pure" )
    {
        auto sys = generators::fig1();
        sys.automata[ 0 ].initial = "nowhere";
        const auto a = model::validate( sys );
        const auto b = model::validate( sys );
        REQUIRE( a.size() == b.size() );
        for ( std::size_t i = 0; i < a.size(); ++i )
            CHECK( model::to_string( a[ i ] ) == model::to_string( b[ i ] ) );
    }

    TEST_CASE( "fig1 stepping" )
    {
        const auto sys = generators::fig1();
        const model::semantics sem{ sys };
        const auto b = *sys.event_index( "b" );
        const auto alpha = *sys.event_index( "alpha" );
        CHECK( sem.enabled( fig1_state( 0, 0, 0 ), b ) == fig1_state( 1, 0, 1 ) );
        CHECK( sem.enabled( fig1_state( 3, 3, 2 ), alpha ) == fig1_state( 5, 3, 2 ) );
        CHECK( sem.enabled( fig1_state( 3, 2, 2 ), alpha ) == fig1_state( 4, 2, 2 ) );
        CHECK_FALSE( sem.enabled( fig1_state( 3, 2, 1 ), alpha ) );
        CHECK_FALSE( sem.enabled( fig1_state( 0, 0, 0 ), *sys.event_index( "omega" ) ) );
        // Implicit domain guard: x + 1 would leave [0,3].
        CHECK_FALSE( sem.enabled( fig1_state( 3, 3, 1 ), *sys.event_index( "c" ) ) );
        CHECK( sem.forbidden( fig1_state( 5, 0, 0 ) ) );
        CHECK_FALSE( sem.forbidden( fig1_state( 4, 0, 0 ) ) );
    }

    TEST_CASE( "initial states" )
    {
        CHECK( model::initial_state( generators::fig1() ) == fig1_state( 0, 0, 0 ) );

        model::system tiny;
        tiny.events = { { "e", true } };
        model::automaton a;
        a.name = "A";
        a.locations = { "l0" };
        a.initial = "l0";
        tiny.automata.push_back( a );
        CHECK( model::initial_state( tiny ) == model::explicit_state{ { 0 }, {} } );

        const auto edp = generators::edp( 2, 1 );
        const auto init = model::initial_state( edp );
        for ( std::size_t a = 0; a < edp.automata.size(); ++a )
            if ( edp.automata[ a ].name.rfind( "phil", 0 ) == 0 )
                CHECK( edp.automata[ a ].locations[ static_cast< std::size_t >( init.locations[ a ] ) ] == "think" );
        for ( auto v : init.values )
            CHECK( v == 0 );
    }

    TEST_CASE( "fig1 uncontrolled reachability has the hazard" )
    {
        const auto sys = generators::fig1();
        const auto r = testing::reach( sys );
        CHECK( r.count( fig1_state( 3, 3, 2 ) ) );
        CHECK( std::any_of( r.begin(), r.end(), []( const auto& s ) { return s.locations[ 0 ] == 5; } ) );
    }

    TEST_CASE( "determinism holds by enumeration on random systems" )
    {
        for ( std::uint64_t seed = 0; seed < 50; ++seed )
        {
            const auto sys = testing::small_random( seed );
            REQUIRE( model::validate( sys ).empty() );
            const model::semantics sem{ sys };
            sem.for_each_state( [ & ]( const model::explicit_state& s ) {
                for ( std::size_t e = 0; e < sys.events.size(); ++e )
                {
                    // At most one enabled transition per participating automaton.
                    for ( std::size_t a = 0; a < sys.automata.size(); ++a )
                    {
                        int enabled = 0;
                        for ( const auto& t : sys.automata[ a ].transitions )
                            if ( t.event == sys.events[ e ].name &&
                                 sys.automata[ a ].locations[ static_cast< std::size_t >( s.locations[ a ] ) ] == t.from &&
                                 sem.holds( t.condition, s ) )
                                ++enabled;
                        CHECK( enabled <= 1 );
                    }
                    if ( const auto next = sem.enabled( s, e ) )
                        CHECK( sem.in_domain( *next ) );
                }
            } );
        }
    }

    TEST_CASE( "guard text round trip" )
    {
        for ( const char* text : { "x == 2", "!(x < 1) && y >= 3", "plant@l3 || x != 0", "true", "false",
                                   "(x <= 2 || y <= 1) && !plant@l1" } )
        {
            const auto g = model::parse_guard( text );
            CHECK( model::to_string( model::parse_guard( model::to_string( g ) ) ) == model::to_string( g ) );
        }
        CHECK_THROWS_AS( model::parse_guard( "x === 2" ), model::model_error );
        CHECK_THROWS_AS( model::parse_guard( "(x < 2" ), model::model_error );
    }

    TEST_CASE( "update text" )
    {
        CHECK( model::parse_update( "x", "3" ) == model::update::assign( "x", 3 ) );
        CHECK( model::parse_update( "x", "x+1" ) == model::update::add( "x", 1 ) );
        CHECK( model::parse_update( "x", "x-2" ) == model::update::add( "x", -2 ) );
        CHECK( model::parse_update( "x", "x" ).how == model::update::kind::keep );
        CHECK( model::update_rhs( model::update::add( "y", -1 ) ) == "y-1" );
        CHECK_THROWS_AS( model::parse_update( "x", "y+1" ), model::model_error );
    }
}
