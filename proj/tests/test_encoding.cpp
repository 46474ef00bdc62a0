#include "support.hpp"

#include "pdrc/sat.hpp"

#include <doctest.h>

#include <random>

using namespace pdrc;
using sat::lit;

TEST_SUITE( "encoding" )
{
    TEST_CASE( "one-hot location and unary variable layout" )
    {
        model::system sys;
        sys.variables = { { "x", 0, 5, 3 } };
        sys.events = { { "e", true } };
        model::automaton a;
        a.name = "A";
        a.locations = { "l1", "l2", "l3", "l4", "l5" };
        a.initial = "l3";
        sys.automata.push_back( a );
        const auto sym = encoding::encode( sys );
        const auto bits = encoding::encode_state( sym.map, model::initial_state( sys ), 0 );
        std::vector< bool > loc, var;
        for ( std::uint32_t i = 0; i < 5; ++i )
            loc.push_back( bits[ sym.map.locations[ 0 ].bit( i ) ] );
        for ( std::uint32_t i = 0; i < 5; ++i )
            var.push_back( bits[ sym.map.variables[ 0 ].bit( i ) ] );
        CHECK( loc == std::vector< bool >{ false, false, true, false, false } );
        CHECK( var == std::vector< bool >{ true, true, true, false, false } );
        const auto back = encoding::decode_state( sym.map, bits );
        CHECK( back.state == model::initial_state( sys ) );
    }

    TEST_CASE( "all-zero unary block decodes to the minimum" )
    {
        model::system sys;
        sys.variables = { { "x", 2, 6, 2 } };
        sys.events = { { "e", true } };
        model::automaton a;
        a.name = "A";
        a.locations = { "l0" };
        a.initial = "l0";
        sys.automata.push_back( a );
        const auto sym = encoding::encode( sys );
        std::vector< bool > bits( sym.map.state_bits );
        bits[ sym.map.locations[ 0 ].bit( 0 ) ] = true;
        bits[ sym.map.event( 0 ).variable() ] = true;
        CHECK( encoding::decode_state( sym.map, bits ).state.values[ 0 ] == 2 );
        bits[ sym.map.variables[ 0 ].bit( 2 ) ] = true;   // gap in the unary prefix
        CHECK_THROWS_AS( encoding::decode_state( sym.map, bits ), encoding::malformed_assignment );
    }

    TEST_CASE( "round trip on 1000 random states" )
    {
        std::mt19937_64 rng{ 99 };
        const auto sys = generators::cmt( 2, 3 );
        const auto sym = encoding::encode( sys );
        for ( int i = 0; i < 1000; ++i )
        {
            model::explicit_state s{ { 0 }, {} };
            for ( const auto& v : sys.variables )
                s.values.push_back( std::uniform_int_distribution< long >{ v.min, v.max }( rng ) );
            const auto e = rng() % sys.events.size();
            const auto d = encoding::decode_state( sym.map, encoding::encode_state( sym.map, s, e ) );
            REQUIRE( d.state == s );
            REQUIRE( d.event == e );
        }
    }

    TEST_CASE( "single-location zero-variable system" )
    {
        model::system sys;
        sys.events = { { "e", true } };
        model::automaton a;
        a.name = "A";
        a.locations = { "l0" };
        a.initial = "l0";
        a.transitions = { { "l0", "e", "l0", model::guard::truth(), {} } };
        sys.automata.push_back( a );
        const auto sym = encoding::encode( sys );
        CHECK( sym.map.state_bits == 2 );
        sat::solver s;
        sym.load( s );
        const std::vector< lit > step{ sym.ind_c, sym.map.event( 0 ) };
        CHECK( s.solve( std::span< const lit >{ step } ) == sat::status::satisfiable );
        CHECK( s.model_value( sym.map.prime( sym.map.location( 0, 0 ) ).variable() ) );
    }

    TEST_CASE( "fig1 alpha step from the uncontrollable preimage" )
    {
        const auto sys = generators::fig1();
        const auto sym = encoding::encode( sys );
        sat::solver s;
        sym.load( s );
        const model::explicit_state q{ { 3 }, { 3, 2 } };
        auto as = encoding::state_cube( sym.map, q, *sys.event_index( "alpha" ) ).lits;
        as.push_back( sym.ind_u );
        REQUIRE( s.solve( std::span< const lit >{ as } ) == sat::status::satisfiable );
        std::vector< bool > next( sym.map.state_bits );
        for ( sat::var b = 0; b < sym.map.state_bits; ++b )
            next[ b ] = s.model_value( b + sym.map.state_bits );
        CHECK( encoding::decode_state( sym.map, next ).state == model::explicit_state{ { 5 }, { 3, 2 } } );
    }

    TEST_CASE( "transition relation equals enabled on random systems" )
    {
        for ( std::uint64_t seed = 0; seed < 40; ++seed )
        {
            const auto sys = testing::small_random( seed );
            const auto sym = encoding::encode( sys );
            const model::semantics sem{ sys };
            sat::solver s;
            sym.load( s );
            for ( const auto& p : testing::all_pairs( sys ) )
            {
                const auto expected = sem.enabled( p.state, p.event );
                const auto got = testing::symbolic_successors( s, sym, p );
                REQUIRE( got.size() == ( expected ? 1u : 0u ) );
                if ( expected )
                    REQUIRE( got.front() == *expected );
            }
        }
    }

    TEST_CASE( "cone partition and invariant preservation" )
    {
        for ( std::uint64_t seed = 100; seed < 140; ++seed )
        {
            const auto sym = encoding::encode( testing::small_random( seed ) );
            sat::solver s;
            s.reserve_vars( sym.num_vars );
            // Only the definitions and cones: the invariant on primed bits must follow.
            for ( const auto* part : { &sym.definitions, &sym.trans_c, &sym.trans_u } )
                for ( const auto& c : *part )
                    s.add_clause( c );
            for ( const auto& c : sym.invariant() )
                s.add_clause( c );
            for ( std::size_t e = 0; e < sym.controllable.size(); ++e )
            {
                const auto ev = sym.map.event( e );
                const std::vector< lit > wrong{ sym.controllable[ e ] ? sym.ind_u : sym.ind_c, ev };
                CHECK( s.solve( std::span< const lit >{ wrong } ) == sat::status::unsatisfiable );
            }
            // Each clause of the state invariant, primed, must hold after any step.
            for ( const auto& c : sym.primed( sym.state_invariant ) )
            {
                auto as = sat::negate( c ).lits;
                as.push_back( sym.ind_any );
                CHECK( s.solve( std::span< const lit >{ as } ) == sat::status::unsatisfiable );
            }
        }
    }

    TEST_CASE( "I and P characterise the initial and forbidden states" )
    {
        for ( std::uint64_t seed = 200; seed < 230; ++seed )
        {
            const auto sys = testing::small_random( seed );
            const auto sym = encoding::encode( sys );
            const model::semantics sem{ sys };
            sat::solver s;
            sym.load( s );
            for ( const auto& p : testing::all_pairs( sys ) )
            {
                const auto bits = testing::bits_of( sym, p );
                CHECK( encoding::satisfies( bits, sym.init ) == ( p.state == model::initial_state( sys ) ) );
                auto as = encoding::state_cube( sym.map, p.state, p.event ).lits;
                as.push_back( sym.bad );
                CHECK( ( s.solve( std::span< const lit >{ as } ) == sat::status::satisfiable ) == sem.forbidden( p.state ) );
                as.back() = sym.safe;
                CHECK( ( s.solve( std::span< const lit >{ as } ) == sat::status::satisfiable ) == !sem.forbidden( p.state ) );
            }
        }
    }

    TEST_CASE( "cube_to_predicate on the fig1 preimage cube" )
    {
        const auto sys = generators::fig1();
        const auto sym = encoding::encode( sys );
        const auto x = *sys.variable_index( "x" );
        const auto y = *sys.variable_index( "y" );
        const sat::cube t{ { sym.map.location( 0, 3 ), sym.map.event( 3 ),
                             lit::positive( sym.map.variables[ y ].bit( 1 ) ), lit::negative( sym.map.variables[ y ].bit( 2 ) ),
                             lit::positive( sym.map.variables[ x ].bit( 2 ) ) } };
        const auto p = encoding::cube_to_predicate( sym, t );
        REQUIRE( p.locations.size() == 1 );
        CHECK( p.locations[ 0 ] == std::pair< std::size_t, std::size_t >{ 0, 3 } );
        CHECK( p.event == std::optional< std::size_t >{ 3 } );
        const model::semantics sem{ sys };
        for ( long xv = 0; xv <= 3; ++xv )
            for ( long yv = 0; yv <= 3; ++yv )
                CHECK( sem.holds( p.condition, { { 3 }, { xv, yv } } ) == ( yv == 2 && xv > 2 ) );

        const auto empty = encoding::cube_to_predicate( sym, sat::cube{} );
        CHECK( empty.locations.empty() );
        CHECK_FALSE( empty.event );
        CHECK( sem.holds( empty.condition, { { 0 }, { 0, 0 } } ) );

        const auto only_not_l5 = encoding::cube_to_predicate( sym, sat::cube{ { ~sym.map.location( 0, 5 ) } } );
        CHECK( only_not_l5.excluded_locations.size() == 1 );
        CHECK( sem.holds( only_not_l5.condition, { { 0 }, { 1, 1 } } ) );

        CHECK_THROWS_AS( encoding::cube_to_predicate( sym, sat::cube{ { sym.map.prime( lit::positive( 0 ) ) } } ),
                         encoding::contract_violation );
    }

    TEST_CASE( "literal names round trip" )
    {
        const auto sym = encoding::encode( generators::fig1() );
        for ( sat::var b = 0; b < sym.map.state_bits; ++b )
            for ( bool neg : { false, true } )
            {
                const lit l{ b, neg };
                const auto back = encoding::parse_literal( sym, encoding::literal_name( sym, l ) );
                REQUIRE( std::holds_alternative< lit >( back ) );
                CHECK( std::get< lit >( back ) == l );
            }
        CHECK( encoding::literal_name( sym, sym.map.location( 0, 3 ) ) == "plant@l3" );
        CHECK( std::get< bool >( encoding::parse_literal( sym, "x>=0" ) ) );
        CHECK_FALSE( std::get< bool >( encoding::parse_literal( sym, "x>=4" ) ) );
    }

    TEST_CASE( "capacity limit" )
    {
        encoding::encode_options small;
        small.max_state_bits = 8;
        CHECK_THROWS_AS( encoding::encode( generators::fig1(), small ), encoding::capacity_error );
    }
}
