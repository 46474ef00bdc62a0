#include "support.hpp"

#include "pdrc/io.hpp"
#include "pdrc/supervisor.hpp"

#include <doctest.h>

using namespace pdrc;

TEST_SUITE( "io" )
{
    TEST_CASE( "model round trip" )
    {
        for ( const auto& sys : { generators::fig1(), generators::edp( 3, 2 ), generators::cmt( 2, 1 ),
                                  generators::random_system( 3 ) } )
        {
            const auto text = io::write_model( sys );
            const auto back = io::parse_model( text );
            CHECK( io::write_model( back ) == text );
            CHECK( model::validate( back ).empty() );
        }
    }

    TEST_CASE( "hand-written model" )
    {
        const auto sys = io::parse_model( R"({
            "variables": [ { "name": "x", "min": 0, "max": 2, "init": 0 } ],
            "events": [ { "name": "go", "controllable": true }, { "name": "slip", "controllable": false } ],
            "automata": [ {
                "name": "A", "locations": [ "idle", "busy", "broken" ], "initial": "idle", "forbidden": [ "broken" ],
                "transitions": [
                    { "from": "idle", "event": "go", "to": "busy", "updates": { "x": "x+1" } },
                    { "from": "busy", "event": "slip", "to": "broken", "guard": "x >= 2" },
                    { "from": "busy", "event": "go", "to": "idle" }
                ] } ],
            "forbidden": "A@busy && x == 0"
        })" );
        REQUIRE( model::validate( sys ).empty() );
        CHECK( sys.forbidden );
        const auto sym = encoding::encode( sys );
        const auto r = synthesize( sym );
        const auto cmp = oracle::compare( sym, r, oracle::rw_synthesize( sys ) );
        CHECK( cmp.ok() );
    }

    TEST_CASE( "malformed models" )
    {
        CHECK_THROWS_AS( io::parse_model( "{" ), model::model_error );
        CHECK_THROWS_AS( io::parse_model( R"({"variables": 3})" ), model::model_error );
        CHECK_THROWS_AS( io::parse_model( R"({"automata": [ { "name": "A", "locations": ["l0"], "initial": "l0",
            "transitions": [ { "from": "l0", "event": "e", "to": "l0", "guard": "x <" } ] } ]})" ),
                         model::model_error );
    }

    TEST_CASE( "certificate round trip and rejection" )
    {
        const auto sym = encoding::encode( generators::fig1() );
        options o;
        o.inductive_generalization = false;
        const auto c = std::get< controlled >( synthesize( sym, o ) );
        const auto text = io::write_certificate( sym, c.invariant );
        CHECK( text.find( "\"format\": \"pdrc-certificate-1\"" ) != std::string::npos );
        CHECK( io::parse_certificate( sym, text ) == c.invariant );

        const auto edp = encoding::encode( generators::edp( 2, 1 ) );
        CHECK_THROWS_AS( io::parse_certificate( edp, text ), model::model_error );
        CHECK_THROWS_AS( io::parse_certificate( sym, R"({"format":"other","clauses":[]})" ), model::model_error );
        // Literals folding to true drop the clause; to false they vanish from it.
        const auto folded = io::parse_certificate( sym, R"({"format":"pdrc-certificate-1","clauses":[["x>=0"],["x>=4","!plant@l5"]]})" );
        REQUIRE( folded.size() == 1 );
        CHECK( folded[ 0 ] == clause{ { ~sym.map.location( 0, 5 ) } } );
    }
}
