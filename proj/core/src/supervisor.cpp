#include "pdrc/supervisor.hpp"

#include <algorithm>

namespace pdrc
{

model::guard negated_condition( const encoding::symbolic_system& sym, const encoding::predicate& p,
                                std::optional< std::size_t > host )
{
    const auto& sys = sym.source;
    std::vector< model::guard > parts;
    for ( const auto& iv : p.intervals )
    {
        const auto& d = sys.variables[ iv.variable ];
        if ( iv.lo > iv.hi )
            return model::guard::truth();
        if ( iv.lo > d.min )
            parts.push_back( model::guard::compare( d.name, model::cmp_op::le, iv.lo - 1 ) );
        if ( iv.hi < d.max )
            parts.push_back( model::guard::compare( d.name, model::cmp_op::ge, iv.hi + 1 ) );
    }
    for ( const auto& [ a, l ] : p.locations )
        if ( a != host )
            parts.push_back( !model::guard::at( sys.automata[ a ].name, sys.automata[ a ].locations[ l ] ) );
    for ( const auto& [ a, l ] : p.excluded_locations )
        parts.push_back( model::guard::at( sys.automata[ a ].name, sys.automata[ a ].locations[ l ] ) );
    return model::guard::any_of( std::move( parts ) );
}

extraction extract_guards( const encoding::symbolic_system& sym, const supervisor& sup )
{
    const auto& sys = sym.source;
    extraction out{ sys, {} };
    for ( const auto& f : sup.cubes )
    {
        const auto& p = f.selector;
        if ( !p.event )
            throw extraction_error( "supervisor cube without an event: " + encoding::cube_text( sym, f.t ) );
        const auto& event = sys.events[ *p.event ];
        if ( !event.controllable )
            throw extraction_error( "supervisor cube on uncontrollable event '" + event.name + "'" );

        std::vector< std::size_t > participants;
        for ( std::size_t a = 0; a < sys.automata.size(); ++a )
            if ( sys.automata[ a ].declares( event.name ) )
                participants.push_back( a );
        if ( participants.empty() )
            throw extraction_error( "event '" + event.name + "' has no transitions" );

        std::size_t host = participants.front();
        std::optional< std::size_t > host_location;
        for ( const auto a : participants )
        {
            const auto it = std::find_if( p.locations.begin(), p.locations.end(),
                                          [ & ]( const auto& loc ) { return loc.first == a; } );
            if ( it != p.locations.end() )
            {
                host = a;
                host_location = it->second;
                break;
            }
        }

        const auto added = negated_condition( sym, p, host_location ? std::optional{ host } : std::nullopt );
        auto& aut = out.controlled.automata[ host ];
        bool matched = false;
        for ( std::size_t t = 0; t < aut.transitions.size(); ++t )
        {
            auto& tr = aut.transitions[ t ];
            if ( tr.event != event.name )
                continue;
            if ( host_location && tr.from != aut.locations[ *host_location ] )
                continue;
            matched = true;
            tr.condition = tr.condition && added;
            out.strengthenings.push_back( { aut.name, t, tr.from, tr.event, added, f.frame } );
        }
        if ( !matched )
            throw extraction_error( "supervisor cube matches no transition: " + encoding::cube_text( sym, f.t ) );
    }
    const auto diagnostics = model::validate( out.controlled );
    if ( !diagnostics.empty() )
        throw extraction_error( "controlled system does not validate: " + model::to_string( diagnostics.front() ) );
    return out;
}

bool certificate_verdict::passed() const
{
    return std::all_of( checks.begin(), checks.end(), []( const check& c ) { return c.passed; } );
}

certificate_verdict check_certificate( const encoding::symbolic_system& sym, const std::vector< clause >& invariant,
                                       const supervisor& sup )
{
    sat::solver s;
    sym.load( s );
    auto fresh = [ & ] { return lit::positive( s.new_var() ); };
    auto guarded = [ & ]( lit act, std::vector< lit > lits ) {
        lits.push_back( ~act );
        s.add_clause( std::span< const lit >{ lits } );
    };

    for ( const auto& f : sup.cubes )
    {
        auto lits = negate( f.t ).lits;
        lits.push_back( ~sym.ind_c );
        s.add_clause( std::span< const lit >{ lits } );
    }

    const auto init = fresh();
    for ( const auto& c : sym.init )
        guarded( init, c.lits );
    const auto inv = fresh();
    for ( const auto& c : invariant )
        guarded( inv, c.lits );

    // violated(primed) -> some clause of Inv (or Inv') is false.
    auto violation = [ & ]( bool primed ) {
        const auto root = fresh();
        std::vector< lit > any;
        for ( const auto& c : invariant )
        {
            const auto q = fresh();
            for ( auto l : c.lits )
                guarded( q, { primed ? sym.map.prime( ~l ) : ~l } );
            any.push_back( q );
        }
        guarded( root, any );
        return root;
    };
    const auto not_inv = violation( false );
    const auto not_inv_next = violation( true );

    auto witness = [ & ] {
        std::vector< bool > bits( sym.map.state_bits );
        for ( sat::var b = 0; b < sym.map.state_bits; ++b )
            bits[ b ] = s.model_value( b );
        try
        {
            const auto d = encoding::decode_state( sym.map, bits );
            auto text = model::to_string( sym.source, d.state );
            if ( d.event )
                text += " event " + sym.source.events[ *d.event ].name;
            return text;
        }
        catch ( const encoding::malformed_assignment& e )
        {
            return std::string{ "malformed: " } + e.what();
        }
    };

    certificate_verdict out;
    auto run = [ & ]( const char* name, std::initializer_list< lit > assumptions ) {
        certificate_verdict::check c{ name, false, {} };
        const auto status = s.solve( assumptions );
        if ( status == sat::status::budget_exhausted )
            throw sat::error( "unexpected budget exhaustion" );
        c.passed = status == sat::status::unsatisfiable;
        if ( !c.passed )
            c.witness = witness();
        out.checks.push_back( std::move( c ) );
    };
    run( "initiation", { init, not_inv } );
    run( "consecution", { inv, sym.ind_any, not_inv_next } );
    run( "safety", { inv, sym.bad } );
    return out;
}

} // namespace pdrc
