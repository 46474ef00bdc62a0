#include "pdrc/generators.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace pdrc::generators
{

using model::cmp_op;
using model::guard;
using model::update;

model::system fig1()
{
    model::system sys;
    sys.variables = { { "x", 0, 3, 0 }, { "y", 0, 3, 0 } };
    sys.events = { { "a", true }, { "b", true }, { "c", true }, { "alpha", false }, { "omega", false } };

    model::automaton plant;
    plant.name = "plant";
    plant.locations = { "l0", "l1", "l2", "l3", "l4", "l5" };
    plant.initial = "l0";
    plant.forbidden = { "l5" };
    const auto y_is_2 = guard::compare( "y", cmp_op::eq, 2 );
    plant.transitions = {
        { "l0", "b", "l1", guard::truth(), { update::assign( "y", 1 ) } },
        { "l0", "a", "l2", guard::truth(), { update::assign( "y", 2 ) } },
        { "l1", "a", "l3", guard::truth(), {} },
        { "l3", "c", "l1", guard::truth(), { update::add( "x", 1 ) } },
        { "l2", "b", "l3", guard::truth(), {} },
        { "l3", "alpha", "l4", y_is_2 && guard::compare( "x", cmp_op::le, 2 ), {} },
        { "l3", "alpha", "l5", y_is_2 && guard::compare( "x", cmp_op::gt, 2 ), {} },
        { "l4", "omega", "l4", guard::truth(), {} },
    };
    sys.automata.push_back( std::move( plant ) );
    return sys;
}

model::system edp( int n, int k )
{
    if ( n < 2 || k < 1 )
        throw parameter_error( "EDP needs n >= 2 and k >= 1" );
    model::system sys;
    auto name = []( const char* stem, int i ) { return stem + std::to_string( i ); };

    for ( int i = 0; i < n; ++i )
        sys.variables.push_back( { name( "c", i ), 0, k, 0 } );
    for ( int i = 0; i < n; ++i )
    {
        for ( const char* stem : { "tl", "step", "tr", "rel" } )
            sys.events.push_back( { name( stem, i ), true } );
        if ( i % 2 == 0 )
            sys.events.push_back( { name( "grab", i ), false } );
    }

    for ( int i = 0; i < n; ++i )
    {
        model::automaton p;
        p.name = name( "phil", i );
        p.locations = { "think", "hasleft", "eat" };
        p.initial = "think";
        const auto c = name( "c", i );
        p.transitions = {
            { "think", name( "tl", i ), "hasleft", guard::truth(), { update::assign( c, 0 ) } },
            { "hasleft", name( "step", i ), "hasleft", guard::compare( c, cmp_op::lt, k ), { update::add( c, 1 ) } },
            { "hasleft", name( "tr", i ), "eat", guard::compare( c, cmp_op::eq, k ), {} },
            { "eat", name( "rel", i ), "think", guard::truth(), { update::assign( c, 0 ) } },
        };
        if ( i % 2 == 0 )
        {
            p.locations.push_back( "crash" );
            p.forbidden = { "crash" };
            p.transitions.push_back( { "think", name( "grab", i ), "crash", guard::truth(), {} } );
        }
        sys.automata.push_back( std::move( p ) );
    }

    for ( int j = 0; j < n; ++j )
    {
        const int left_of = ( j + n - 1 ) % n;   // fork j is the right fork of philosopher j-1
        model::automaton f;
        f.name = name( "fork", j );
        f.locations = { "free", "held" };
        f.initial = "free";
        f.transitions = {
            { "free", name( "tl", j ), "held", guard::truth(), {} },
            { "free", name( "tr", left_of ), "held", guard::truth(), {} },
            { "held", name( "rel", j ), "free", guard::truth(), {} },
            { "held", name( "rel", left_of ), "free", guard::truth(), {} },
        };
        if ( j % 2 == 0 )
            f.transitions.push_back( { "held", name( "grab", j ), "held", guard::truth(), {} } );
        sys.automata.push_back( std::move( f ) );
    }
    return sys;
}

model::system cmt( int n, int k )
{
    if ( n < 1 || k < 1 )
        throw parameter_error( "CMT needs n >= 1 and k >= 1" );
    model::system sys;
    auto var = []( const char* species, int f, int r ) {
        return std::string{ species } + "_" + std::to_string( f ) + "_" + std::to_string( r );
    };

    for ( int f = 0; f < n; ++f )
        for ( int r = 0; r < 5; ++r )
        {
            sys.variables.push_back( { var( "cat", f, r ), 0, k, f == 0 && r == 0 ? k : 0 } );
            sys.variables.push_back( { var( "mouse", f, r ), 0, k, f == n - 1 && r == 4 ? k : 0 } );
        }

    model::automaton tower;
    tower.name = "tower";
    tower.locations = { "run" };
    tower.initial = "run";

    // A move of one animal from (f1, r1) to (f2, r2). Controllable moves only
    // enter rooms without the other species.
    auto move = [ & ]( const char* species, const char* other, int f1, int r1, int f2, int r2, bool controllable ) {
        std::string event = std::string{ species } + "_" + std::to_string( f1 ) + "_" + std::to_string( r1 ) + "_" +
                            std::to_string( f2 ) + "_" + std::to_string( r2 );
        sys.events.push_back( { event, controllable } );
        auto condition = guard::compare( var( species, f1, r1 ), cmp_op::ge, 1 );
        if ( controllable )
            condition = condition && guard::compare( var( other, f2, r2 ), cmp_op::eq, 0 );
        tower.transitions.push_back( { "run", event, "run", condition,
                                       { update::add( var( species, f1, r1 ), -1 ),
                                         update::add( var( species, f2, r2 ), 1 ) } } );
    };

    static constexpr std::pair< int, int > cat_doors[] = { { 0, 1 }, { 1, 2 }, { 2, 0 }, { 0, 3 }, { 3, 4 }, { 4, 0 } };
    static constexpr std::pair< int, int > mouse_doors[] = { { 0, 2 }, { 2, 1 }, { 1, 0 }, { 0, 4 }, { 4, 3 }, { 3, 0 } };
    for ( int f = 0; f < n; ++f )
    {
        for ( const auto& [ a, b ] : cat_doors )
            move( "cat", "mouse", f, a, f, b, true );
        move( "cat", "mouse", f, 1, f, 3, false );
        for ( const auto& [ a, b ] : mouse_doors )
            move( "mouse", "cat", f, a, f, b, true );
        move( "mouse", "cat", f, 3, f, 1, false );
    }
    for ( int f = 0; f + 1 < n; ++f )
        for ( const auto& [ species, other ] : { std::pair{ "cat", "mouse" }, std::pair{ "mouse", "cat" } } )
        {
            move( species, other, f, 4, f + 1, 0, true );
            move( species, other, f + 1, 0, f, 4, true );
        }
    sys.automata.push_back( std::move( tower ) );

    std::vector< guard > clash;
    for ( int f = 0; f < n; ++f )
        for ( int r = 0; r < 5; ++r )
            clash.push_back( guard::compare( var( "cat", f, r ), cmp_op::ge, 1 ) &&
                             guard::compare( var( "mouse", f, r ), cmp_op::ge, 1 ) );
    sys.forbidden = guard::any_of( std::move( clash ) );
    return sys;
}

model::system random_system( std::uint64_t seed, const random_bounds& bounds )
{
    std::mt19937_64 rng{ seed };
    auto uniform = [ & ]( int lo, int hi ) { return std::uniform_int_distribution< int >{ lo, hi }( rng ); };
    auto chance = [ & ]( double p ) { return std::bernoulli_distribution{ p }( rng ); };

    model::system sys;
    const int nv = uniform( 0, bounds.max_variables );
    for ( int v = 0; v < nv; ++v )
    {
        const long min = uniform( -1, 1 );
        const long max = min + uniform( 1, bounds.max_domain ) - 1;
        sys.variables.push_back( { "v" + std::to_string( v ), min, max, uniform( static_cast< int >( min ), static_cast< int >( max ) ) } );
    }
    const int ne = uniform( 1, bounds.max_events );
    for ( int e = 0; e < ne; ++e )
    {
        const bool u = chance( bounds.uncontrollable_probability );
        sys.events.push_back( { ( u ? "u" : "e" ) + std::to_string( e ), !u } );
    }

    auto random_atom = [ & ]() {
        const auto& d = sys.variables[ static_cast< std::size_t >( uniform( 0, nv - 1 ) ) ];
        static constexpr cmp_op ops[] = { cmp_op::eq, cmp_op::ne, cmp_op::lt, cmp_op::le, cmp_op::gt, cmp_op::ge };
        return guard::compare( d.name, ops[ uniform( 0, 5 ) ], uniform( static_cast< int >( d.min ), static_cast< int >( d.max ) ) );
    };
    auto random_guard = [ & ]() {
        if ( nv == 0 || chance( 0.5 ) )
            return guard::truth();
        auto g = random_atom();
        if ( chance( 0.3 ) )
            g = chance( 0.5 ) ? ( g && random_atom() ) : ( g || random_atom() );
        return g;
    };

    const int na = uniform( 1, bounds.max_automata );
    std::vector< bool > owned( static_cast< std::size_t >( ne ) );
    for ( int a = 0; a < na; ++a )
    {
        model::automaton aut;
        aut.name = "A" + std::to_string( a );
        const int nl = uniform( 1, bounds.max_locations );
        for ( int l = 0; l < nl; ++l )
            aut.locations.push_back( "l" + std::to_string( l ) );
        aut.initial = "l0";

        std::vector< int > declared;
        for ( int e = 0; e < ne; ++e )
            if ( chance( 0.5 ) )
                declared.push_back( e );
        if ( declared.empty() )
            declared.push_back( uniform( 0, ne - 1 ) );

        for ( const int e : declared )
        {
            const bool owner = !owned[ static_cast< std::size_t >( e ) ];
            owned[ static_cast< std::size_t >( e ) ] = true;
            const auto& event = sys.events[ static_cast< std::size_t >( e ) ].name;
            auto random_updates = [ & ]() {
                std::vector< update > ups;
                if ( !owner )
                    return ups;
                for ( const auto& d : sys.variables )
                {
                    if ( !chance( 0.4 ) )
                        continue;
                    switch ( uniform( 0, 2 ) )
                    {
                    case 0: ups.push_back( update::assign( d.name, uniform( static_cast< int >( d.min ), static_cast< int >( d.max ) ) ) ); break;
                    case 1: ups.push_back( update::add( d.name, 1 ) ); break;
                    default: ups.push_back( update::add( d.name, -1 ) ); break;
                    }
                }
                return ups;
            };
            bool any = false;
            for ( int l = 0; l < nl; ++l )
            {
                const auto from = aut.locations[ static_cast< std::size_t >( l ) ];
                const int roll = uniform( 0, 9 );
                if ( roll < 3 )
                    continue;
                auto to = [ & ] { return aut.locations[ static_cast< std::size_t >( uniform( 0, nl - 1 ) ) ]; };
                if ( roll >= 8 && nv > 0 )
                {
                    // Two branches split on a threshold of one variable.
                    const auto& d = sys.variables[ static_cast< std::size_t >( uniform( 0, nv - 1 ) ) ];
                    const long cut = uniform( static_cast< int >( d.min ), static_cast< int >( d.max ) );
                    aut.transitions.push_back( { from, event, to(), guard::compare( d.name, cmp_op::lt, cut ) && random_guard(), random_updates() } );
                    aut.transitions.push_back( { from, event, to(), guard::compare( d.name, cmp_op::ge, cut ) && random_guard(), random_updates() } );
                }
                else
                    aut.transitions.push_back( { from, event, to(), random_guard(), random_updates() } );
                any = true;
            }
            if ( !any )
                aut.transitions.push_back( { aut.locations[ static_cast< std::size_t >( uniform( 0, nl - 1 ) ) ], event,
                                             aut.locations[ static_cast< std::size_t >( uniform( 0, nl - 1 ) ) ], random_guard(),
                                             random_updates() } );
        }
        sys.automata.push_back( std::move( aut ) );
    }

    const int nf = uniform( 0, bounds.max_forbidden );
    for ( int i = 0; i < nf; ++i )
    {
        auto& aut = sys.automata[ static_cast< std::size_t >( uniform( 0, na - 1 ) ) ];
        // Mostly non-initial locations, so most instances are not trivially lost.
        const int lo = aut.locations.size() > 1 && chance( 0.9 ) ? 1 : 0;
        const auto& loc = aut.locations[ static_cast< std::size_t >( uniform( lo, static_cast< int >( aut.locations.size() ) - 1 ) ) ];
        if ( std::find( aut.forbidden.begin(), aut.forbidden.end(), loc ) == aut.forbidden.end() )
            aut.forbidden.push_back( loc );
    }
    if ( nv > 0 && chance( 0.2 ) )
        sys.forbidden = random_atom();
    return sys;
}

} // namespace pdrc::generators
