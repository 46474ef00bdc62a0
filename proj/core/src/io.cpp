#include "pdrc/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace pdrc::io
{

using json = nlohmann::ordered_json;

namespace
{

[[noreturn]] void fail( const std::string& what ) { throw model::model_error( "model file: " + what ); }

const json& field( const json& obj, const char* key, const std::string& where )
{
    if ( !obj.is_object() )
        fail( where + " must be an object" );
    const auto it = obj.find( key );
    if ( it == obj.end() )
        fail( where + " lacks '" + key + "'" );
    return *it;
}

std::string text( const json& j, const std::string& where )
{
    if ( !j.is_string() )
        fail( where + " must be a string" );
    return j.get< std::string >();
}

long integer( const json& j, const std::string& where )
{
    if ( !j.is_number_integer() )
        fail( where + " must be an integer" );
    return j.get< long >();
}

std::vector< std::string > strings( const json& j, const std::string& where )
{
    if ( !j.is_array() )
        fail( where + " must be a list" );
    std::vector< std::string > out;
    for ( const auto& item : j )
        out.push_back( text( item, where ) );
    return out;
}

const json& list( const json& j, const std::string& where )
{
    if ( !j.is_array() )
        fail( where + " must be a list" );
    return j;
}

} // namespace

model::system parse_model( std::string_view source )
{
    json doc;
    try
    {
        doc = json::parse( source );
    }
    catch ( const json::parse_error& e )
    {
        fail( std::string{ "not valid JSON: " } + e.what() );
    }
    if ( !doc.is_object() )
        fail( "top level must be an object" );

    model::system sys;
    if ( doc.contains( "variables" ) )
        for ( const auto& v : list( doc[ "variables" ], "variables" ) )
            sys.variables.push_back( { text( field( v, "name", "variable" ), "variable name" ),
                                       integer( field( v, "min", "variable" ), "min" ),
                                       integer( field( v, "max", "variable" ), "max" ),
                                       integer( field( v, "init", "variable" ), "init" ) } );
    for ( const auto& e : list( field( doc, "events", "model" ), "events" ) )
    {
        const auto& c = field( e, "controllable", "event" );
        if ( !c.is_boolean() )
            fail( "event 'controllable' must be true or false" );
        sys.events.push_back( { text( field( e, "name", "event" ), "event name" ), c.get< bool >() } );
    }
    for ( const auto& a : list( field( doc, "automata", "model" ), "automata" ) )
    {
        model::automaton aut;
        aut.name = text( field( a, "name", "automaton" ), "automaton name" );
        const auto where = "automaton '" + aut.name + "'";
        aut.locations = strings( field( a, "locations", where ), where + " locations" );
        aut.initial = text( field( a, "initial", where ), where + " initial" );
        if ( a.contains( "forbidden" ) )
            aut.forbidden = strings( a[ "forbidden" ], where + " forbidden" );
        if ( a.contains( "transitions" ) )
            for ( const auto& t : list( a[ "transitions" ], where + " transitions" ) )
            {
                model::transition tr;
                tr.from = text( field( t, "from", where + " transition" ), "from" );
                tr.event = text( field( t, "event", where + " transition" ), "event" );
                tr.to = text( field( t, "to", where + " transition" ), "to" );
                if ( t.contains( "guard" ) )
                    tr.condition = model::parse_guard( text( t[ "guard" ], "guard" ) );
                if ( t.contains( "updates" ) )
                {
                    const auto& ups = t[ "updates" ];
                    if ( !ups.is_object() )
                        fail( "updates must be an object" );
                    for ( const auto& [ var, rhs ] : ups.items() )
                        tr.updates.push_back( model::parse_update( var, text( rhs, "update" ) ) );
                }
                aut.transitions.push_back( std::move( tr ) );
            }
        sys.automata.push_back( std::move( aut ) );
    }
    if ( doc.contains( "forbidden" ) )
        sys.forbidden = model::parse_guard( text( doc[ "forbidden" ], "forbidden" ) );
    return sys;
}

std::string read_file( const std::filesystem::path& path )
{
    std::ifstream in{ path, std::ios::binary };
    if ( !in )
        throw model::model_error( "cannot open '" + path.string() + "'" );
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

model::system read_model_file( const std::filesystem::path& path ) { return parse_model( read_file( path ) ); }

std::string write_model( const model::system& sys )
{
    json doc;
    doc[ "variables" ] = json::array();
    for ( const auto& v : sys.variables )
        doc[ "variables" ].push_back( { { "name", v.name }, { "min", v.min }, { "max", v.max }, { "init", v.init } } );
    doc[ "events" ] = json::array();
    for ( const auto& e : sys.events )
        doc[ "events" ].push_back( { { "name", e.name }, { "controllable", e.controllable } } );
    doc[ "automata" ] = json::array();
    for ( const auto& a : sys.automata )
    {
        json aut;
        aut[ "name" ] = a.name;
        aut[ "locations" ] = a.locations;
        aut[ "initial" ] = a.initial;
        aut[ "forbidden" ] = a.forbidden;
        aut[ "transitions" ] = json::array();
        for ( const auto& t : a.transitions )
        {
            json tr{ { "from", t.from }, { "event", t.event }, { "to", t.to } };
            if ( !t.condition.is_true() )
                tr[ "guard" ] = model::to_string( t.condition );
            if ( !t.updates.empty() )
            {
                json ups = json::object();
                for ( const auto& u : t.updates )
                    ups[ u.var ] = model::update_rhs( u );
                tr[ "updates" ] = std::move( ups );
            }
            aut[ "transitions" ].push_back( std::move( tr ) );
        }
        doc[ "automata" ].push_back( std::move( aut ) );
    }
    if ( sys.forbidden )
        doc[ "forbidden" ] = model::to_string( *sys.forbidden );
    return doc.dump( 2 ) + "\n";
}

std::string write_certificate( const encoding::symbolic_system& sym, const std::vector< sat::clause >& clauses )
{
    json doc;
    doc[ "format" ] = certificate_format;
    doc[ "clauses" ] = json::array();
    for ( const auto& c : clauses )
    {
        json names = json::array();
        for ( auto l : c.lits )
            names.push_back( encoding::literal_name( sym, l ) );
        doc[ "clauses" ].push_back( std::move( names ) );
    }
    return doc.dump( 2 ) + "\n";
}

std::vector< sat::clause > parse_certificate( const encoding::symbolic_system& sym, std::string_view source )
{
    json doc;
    try
    {
        doc = json::parse( source );
    }
    catch ( const json::parse_error& e )
    {
        throw model::model_error( std::string{ "certificate: not valid JSON: " } + e.what() );
    }
    if ( !doc.is_object() || doc.value( "format", "" ) != certificate_format )
        throw model::model_error( "certificate: unknown format" );
    std::vector< sat::clause > out;
    for ( const auto& c : list( field( doc, "clauses", "certificate" ), "clauses" ) )
    {
        std::vector< sat::lit > lits;
        bool satisfied = false;
        for ( const auto& name : strings( c, "clause" ) )
        {
            const auto l = encoding::parse_literal( sym, name );
            if ( const auto* b = std::get_if< bool >( &l ) )
                satisfied = satisfied || *b;
            else
                lits.push_back( std::get< sat::lit >( l ) );
        }
        if ( satisfied )
            continue;
        try
        {
            out.emplace_back( std::move( lits ) );
        }
        catch ( const std::invalid_argument& )
        {
            // Tautology: l or not l.
        }
    }
    return out;
}

} // namespace pdrc::io
