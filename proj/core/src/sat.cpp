#include "pdrc/sat.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstring>
#include <limits>
#include <ostream>

namespace pdrc::sat
{

std::vector< lit > canonical_literals( std::vector< lit > lits )
{
    std::sort( lits.begin(), lits.end() );
    lits.erase( std::unique( lits.begin(), lits.end() ), lits.end() );
    for ( std::size_t i = 1; i < lits.size(); ++i )
        if ( lits[ i ].variable() == lits[ i - 1 ].variable() )
            throw std::invalid_argument( "complementary literals in clause/cube" );
    return lits;
}

clause::clause( std::vector< lit > ls ) : lits{ canonical_literals( std::move( ls ) ) } {}
cube::cube( std::vector< lit > ls ) : lits{ canonical_literals( std::move( ls ) ) } {}

bool cube::contains( lit l ) const
{
    return std::binary_search( lits.begin(), lits.end(), l );
}

clause negate( const cube& c )
{
    clause out;
    out.lits.reserve( c.lits.size() );
    for ( const auto l : c.lits )
        out.lits.push_back( ~l );
    return out;
}

cube negate( const clause& c )
{
    cube out;
    out.lits.reserve( c.lits.size() );
    for ( const auto l : c.lits )
        out.lits.push_back( ~l );
    return out;
}

namespace
{

using cref = std::uint32_t;
constexpr cref no_reason = std::numeric_limits< cref >::max();

// Truth values: 0 = undefined, 1 = true, 2 = false.
constexpr std::uint8_t l_undef = 0;
constexpr std::uint8_t l_true = 1;
constexpr std::uint8_t l_false = 2;

double luby( double y, int x )
{
    int size = 1;
    int seq = 0;
    while ( size < x + 1 )
    {
        ++seq;
        size = 2 * size + 1;
    }
    while ( size - 1 != x )
    {
        size = ( size - 1 ) >> 1;
        --seq;
        x = x % size;
    }
    double r = 1;
    for ( int i = 0; i < seq; ++i )
        r *= y;
    return r;
}

} // namespace

class solver_impl
{
public:
    // Clause arena. Each clause is a header word (size << 3 | flags), an
    // activity word, then the literal codes.
    static constexpr std::uint32_t flag_learnt = 1;
    static constexpr std::uint32_t flag_deleted = 2;

    std::vector< std::uint32_t > arena;
    std::size_t wasted = 0;
    std::vector< cref > originals;
    std::vector< cref > learnts;

    struct watcher
    {
        cref ref;
        lit blocker;
    };

    std::vector< std::vector< watcher > > watches;
    std::vector< std::uint8_t > assigns;
    std::vector< std::uint8_t > polarity;
    std::vector< int > levels;
    std::vector< cref > reasons;
    std::vector< double > activity;
    std::vector< std::uint8_t > seen;

    std::vector< lit > trail;
    std::vector< std::size_t > trail_lim;
    std::size_t qhead = 0;

    // Binary max-heap over variable activity.
    std::vector< var > heap;
    std::vector< int > heap_index;

    double var_inc = 1.0;
    double var_decay = 0.95;
    double cla_inc = 1.0;
    double cla_decay = 0.999;
    double max_learnts = 0;

    bool ok = true;
    std::size_t simp_trail = 0;

    std::vector< std::uint8_t > model;
    std::vector< lit > conflict_core;
    std::vector< lit > to_clear;
    statistics stats;
    budget limits;

    // Clause access.
    std::uint32_t size( cref c ) const { return arena[ c ] >> 3; }
    bool learnt( cref c ) const { return ( arena[ c ] & flag_learnt ) != 0; }
    bool deleted( cref c ) const { return ( arena[ c ] & flag_deleted ) != 0; }
    lit& at( cref c, std::uint32_t i ) { return reinterpret_cast< lit& >( arena[ c + 2 + i ] ); }
    lit at( cref c, std::uint32_t i ) const { return lit::from_code( arena[ c + 2 + i ] ); }
    float& act( cref c ) { return reinterpret_cast< float& >( arena[ c + 1 ] ); }

    cref alloc( std::span< const lit > lits, bool is_learnt )
    {
        const auto c = static_cast< cref >( arena.size() );
        arena.push_back( static_cast< std::uint32_t >( lits.size() ) << 3 | ( is_learnt ? flag_learnt : 0u ) );
        arena.push_back( std::bit_cast< std::uint32_t >( 0.0f ) );
        for ( const auto l : lits )
            arena.push_back( l.code() );
        return c;
    }

    std::uint8_t value( lit l ) const
    {
        const auto a = assigns[ l.variable() ];
        if ( a == l_undef )
            return l_undef;
        return ( ( a == l_true ) != l.is_negative() ) ? l_true : l_false;
    }

    int decision_level() const { return static_cast< int >( trail_lim.size() ); }
    std::uint32_t nvars() const { return static_cast< std::uint32_t >( assigns.size() ); }

    var new_var()
    {
        const auto v = nvars();
        watches.emplace_back();
        watches.emplace_back();
        assigns.push_back( l_undef );
        polarity.push_back( 1 );
        levels.push_back( 0 );
        reasons.push_back( no_reason );
        activity.push_back( 0.0 );
        seen.push_back( 0 );
        heap_index.push_back( -1 );
        heap_insert( v );
        return v;
    }

    // Heap.
    bool heap_less( var a, var b ) const { return activity[ a ] > activity[ b ]; }

    void heap_up( std::size_t i )
    {
        const var v = heap[ i ];
        while ( i > 0 )
        {
            const auto parent = ( i - 1 ) >> 1;
            if ( !heap_less( v, heap[ parent ] ) )
                break;
            heap[ i ] = heap[ parent ];
            heap_index[ heap[ i ] ] = static_cast< int >( i );
            i = parent;
        }
        heap[ i ] = v;
        heap_index[ v ] = static_cast< int >( i );
    }

    void heap_down( std::size_t i )
    {
        const var v = heap[ i ];
        for ( ;; )
        {
            auto child = 2 * i + 1;
            if ( child >= heap.size() )
                break;
            if ( child + 1 < heap.size() && heap_less( heap[ child + 1 ], heap[ child ] ) )
                ++child;
            if ( !heap_less( heap[ child ], v ) )
                break;
            heap[ i ] = heap[ child ];
            heap_index[ heap[ i ] ] = static_cast< int >( i );
            i = child;
        }
        heap[ i ] = v;
        heap_index[ v ] = static_cast< int >( i );
    }

    void heap_insert( var v )
    {
        if ( heap_index[ v ] >= 0 )
            return;
        heap.push_back( v );
        heap_up( heap.size() - 1 );
    }

    var heap_pop()
    {
        const var top = heap.front();
        heap_index[ top ] = -1;
        const var last = heap.back();
        heap.pop_back();
        if ( !heap.empty() )
        {
            heap[ 0 ] = last;
            heap_index[ last ] = 0;
            heap_down( 0 );
        }
        return top;
    }

    void bump_var( var v )
    {
        if ( ( activity[ v ] += var_inc ) > 1e100 )
        {
            for ( auto& a : activity )
                a *= 1e-100;
            var_inc *= 1e-100;
        }
        if ( heap_index[ v ] >= 0 )
            heap_up( static_cast< std::size_t >( heap_index[ v ] ) );
    }

    void bump_clause( cref c )
    {
        if ( ( act( c ) += static_cast< float >( cla_inc ) ) > 1e20f )
        {
            for ( const auto l : learnts )
                act( l ) *= 1e-20f;
            cla_inc *= 1e-20;
        }
    }

    void attach( cref c )
    {
        watches[ ( ~at( c, 0 ) ).code() ].push_back( { c, at( c, 1 ) } );
        watches[ ( ~at( c, 1 ) ).code() ].push_back( { c, at( c, 0 ) } );
    }

    void enqueue( lit p, cref from )
    {
        const auto v = p.variable();
        assigns[ v ] = p.is_negative() ? l_false : l_true;
        levels[ v ] = decision_level();
        reasons[ v ] = from;
        trail.push_back( p );
    }

    void cancel_until( int level )
    {
        if ( decision_level() <= level )
            return;
        for ( auto i = trail.size(); i-- > trail_lim[ static_cast< std::size_t >( level ) ]; )
        {
            const auto v = trail[ i ].variable();
            assigns[ v ] = l_undef;
            reasons[ v ] = no_reason;
            polarity[ v ] = trail[ i ].is_negative() ? 1 : 0;
            heap_insert( v );
        }
        trail.resize( trail_lim[ static_cast< std::size_t >( level ) ] );
        trail_lim.resize( static_cast< std::size_t >( level ) );
        qhead = trail.size();
    }

    // Watches are indexed by the literal whose falsification triggers a visit.
    cref propagate()
    {
        cref conflict = no_reason;
        while ( qhead < trail.size() )
        {
            const lit p = trail[ qhead++ ];
            const lit false_lit = ~p;
            auto& ws = watches[ p.code() ];
            ++stats.propagations;

            std::size_t i = 0;
            std::size_t j = 0;
            const auto n = ws.size();
            while ( i < n )
            {
                const auto w = ws[ i++ ];
                if ( value( w.blocker ) == l_true )
                {
                    ws[ j++ ] = w;
                    continue;
                }
                const cref c = w.ref;
                if ( deleted( c ) )
                    continue;
                if ( at( c, 0 ) == false_lit )
                    std::swap( at( c, 0 ), at( c, 1 ) );
                const lit first = at( c, 0 );
                if ( first != w.blocker && value( first ) == l_true )
                {
                    ws[ j++ ] = { c, first };
                    continue;
                }

                bool moved = false;
                const auto sz = size( c );
                for ( std::uint32_t k = 2; k < sz; ++k )
                {
                    if ( value( at( c, k ) ) != l_false )
                    {
                        at( c, 1 ) = at( c, k );
                        at( c, k ) = false_lit;
                        watches[ ( ~at( c, 1 ) ).code() ].push_back( { c, first } );
                        moved = true;
                        break;
                    }
                }
                if ( moved )
                    continue;

                ws[ j++ ] = { c, first };
                if ( value( first ) == l_false )
                {
                    conflict = c;
                    qhead = trail.size();
                    while ( i < n )
                        ws[ j++ ] = ws[ i++ ];
                }
                else
                    enqueue( first, c );
            }
            ws.resize( j );
            if ( conflict != no_reason )
                break;
        }
        return conflict;
    }

    bool redundant( lit l )
    {
        const auto r = reasons[ l.variable() ];
        if ( r == no_reason )
            return false;
        for ( std::uint32_t k = 1; k < size( r ); ++k )
        {
            const auto q = at( r, k );
            if ( !seen[ q.variable() ] && levels[ q.variable() ] > 0 )
                return false;
        }
        return true;
    }

    void analyze( cref conflict, std::vector< lit >& out, int& backtrack )
    {
        int path = 0;
        lit p{};
        bool have_p = false;
        out.clear();
        out.emplace_back();
        auto index = trail.size();

        do
        {
            assert( conflict != no_reason );
            if ( learnt( conflict ) )
                bump_clause( conflict );
            for ( std::uint32_t k = have_p ? 1 : 0; k < size( conflict ); ++k )
            {
                const lit q = at( conflict, k );
                const auto v = q.variable();
                if ( !seen[ v ] && levels[ v ] > 0 )
                {
                    bump_var( v );
                    seen[ v ] = 1;
                    if ( levels[ v ] >= decision_level() )
                        ++path;
                    else
                        out.push_back( q );
                }
            }
            while ( !seen[ trail[ --index ].variable() ] )
                ;
            p = trail[ index ];
            have_p = true;
            conflict = reasons[ p.variable() ];
            seen[ p.variable() ] = 0;
            --path;
        } while ( path > 0 );
        out[ 0 ] = ~p;

        // Local minimisation; `seen` is cleared over the unminimised clause.
        to_clear.assign( out.begin() + 1, out.end() );
        std::size_t keep = 1;
        for ( std::size_t k = 1; k < out.size(); ++k )
            if ( !redundant( out[ k ] ) )
                out[ keep++ ] = out[ k ];
        for ( const auto q : to_clear )
            seen[ q.variable() ] = 0;
        out.resize( keep );

        backtrack = 0;
        if ( out.size() > 1 )
        {
            std::size_t max_i = 1;
            for ( std::size_t k = 2; k < out.size(); ++k )
                if ( levels[ out[ k ].variable() ] > levels[ out[ max_i ].variable() ] )
                    max_i = k;
            std::swap( out[ 1 ], out[ max_i ] );
            backtrack = levels[ out[ 1 ].variable() ];
        }
    }

    // `failed` is an assumption that is false under the current assignment.
    void analyze_final( lit failed )
    {
        conflict_core.clear();
        conflict_core.push_back( failed );
        if ( decision_level() == 0 )
            return;
        const auto fv = failed.variable();
        seen[ fv ] = 1;
        for ( auto i = trail.size(); i-- > trail_lim[ 0 ]; )
        {
            const auto v = trail[ i ].variable();
            if ( !seen[ v ] )
                continue;
            const auto r = reasons[ v ];
            if ( r == no_reason )
                conflict_core.push_back( trail[ i ] );   // an assumption, possibly ~failed
            else
            {
                for ( std::uint32_t k = 1; k < size( r ); ++k )
                {
                    const auto q = at( r, k ).variable();
                    if ( levels[ q ] > 0 )
                        seen[ q ] = 1;
                }
            }
            seen[ v ] = 0;
        }
        seen[ fv ] = 0;
    }

    bool locked( cref c ) const
    {
        const lit first = at( c, 0 );
        return value( first ) == l_true && reasons[ first.variable() ] == c;
    }

    void remove_clause( cref c )
    {
        arena[ c ] |= flag_deleted;
        wasted += size( c ) + 2;
    }

    void reduce_db()
    {
        std::sort( learnts.begin(), learnts.end(), [ & ]( cref a, cref b ) {
            const bool ba = size( a ) <= 2;
            const bool bb = size( b ) <= 2;
            if ( ba != bb )
                return !ba;
            return act( a ) < act( b );
        } );
        const auto half = learnts.size() / 2;
        std::size_t j = 0;
        for ( std::size_t i = 0; i < learnts.size(); ++i )
        {
            const cref c = learnts[ i ];
            if ( i < half && size( c ) > 2 && !locked( c ) )
                remove_clause( c );
            else
                learnts[ j++ ] = c;
        }
        learnts.resize( j );
    }

    bool satisfied( cref c ) const
    {
        for ( std::uint32_t k = 0; k < size( c ); ++k )
            if ( value( at( c, k ) ) == l_true )
                return true;
        return false;
    }

    void remove_satisfied( std::vector< cref >& cs )
    {
        std::size_t j = 0;
        for ( const auto c : cs )
        {
            if ( satisfied( c ) )
                remove_clause( c );
            else
                cs[ j++ ] = c;
        }
        cs.resize( j );
    }

    // Compacts the arena and rebuilds every watch list. Only called at level 0,
    // where reasons are not needed for analysis.
    void collect_garbage()
    {
        std::vector< std::uint32_t > fresh;
        fresh.reserve( arena.size() - wasted );
        auto relocate = [ & ]( std::vector< cref >& cs ) {
            for ( auto& c : cs )
            {
                const auto words = size( c ) + 2;
                const auto moved = static_cast< cref >( fresh.size() );
                fresh.insert( fresh.end(), arena.begin() + c, arena.begin() + c + words );
                c = moved;
            }
        };
        relocate( originals );
        relocate( learnts );
        arena = std::move( fresh );
        wasted = 0;
        for ( auto& r : reasons )
            r = no_reason;
        for ( auto& ws : watches )
            ws.clear();
        for ( const auto c : originals )
            attach( c );
        for ( const auto c : learnts )
            attach( c );
    }

    void simplify()
    {
        if ( !ok || trail.size() == simp_trail )
            return;
        if ( propagate() != no_reason )
        {
            ok = false;
            return;
        }
        remove_satisfied( originals );
        remove_satisfied( learnts );
        simp_trail = trail.size();
        if ( wasted > arena.size() / 4 )
            collect_garbage();
    }

    void add_clause( std::span< const lit > input )
    {
        for ( const auto l : input )
            if ( l.variable() >= nvars() )
                throw error( "literal over unallocated variable " + std::to_string( l.variable() ) );
        if ( !ok )
            return;
        assert( decision_level() == 0 );

        std::vector< lit > lits( input.begin(), input.end() );
        std::sort( lits.begin(), lits.end() );
        std::size_t j = 0;
        lit prev{};
        bool have_prev = false;
        for ( const auto l : lits )
        {
            if ( value( l ) == l_true || ( have_prev && l == ~prev ) )
                return;
            if ( value( l ) == l_false || ( have_prev && l == prev ) )
                continue;
            lits[ j++ ] = l;
            prev = l;
            have_prev = true;
        }
        lits.resize( j );

        if ( lits.empty() )
        {
            ok = false;
            return;
        }
        if ( lits.size() == 1 )
        {
            enqueue( lits[ 0 ], no_reason );
            if ( propagate() != no_reason )
                ok = false;
            return;
        }
        const auto c = alloc( lits, false );
        originals.push_back( c );
        attach( c );
    }

    lit pick_branch()
    {
        while ( !heap.empty() )
        {
            const var v = heap_pop();
            if ( assigns[ v ] == l_undef )
            {
                ++stats.decisions;
                return lit{ v, polarity[ v ] != 0 };
            }
        }
        return lit::from_code( std::numeric_limits< std::uint32_t >::max() );
    }

    bool out_of_budget() const
    {
        if ( limits.max_conflicts >= 0 && stats.conflicts >= static_cast< std::uint64_t >( limits.max_conflicts ) )
            return true;
        if ( limits.deadline && std::chrono::steady_clock::now() >= *limits.deadline )
            return true;
        return false;
    }

    status search( std::span< const lit > assumptions, std::int64_t conflicts_allowed )
    {
        std::int64_t conflicts_here = 0;
        std::vector< lit > learnt_clause;
        for ( ;; )
        {
            const cref conflict = propagate();
            if ( conflict != no_reason )
            {
                ++stats.conflicts;
                ++conflicts_here;
                if ( decision_level() == 0 )
                {
                    ok = false;
                    return status::unsatisfiable;
                }
                int backtrack = 0;
                analyze( conflict, learnt_clause, backtrack );
                cancel_until( backtrack );
                if ( learnt_clause.size() == 1 )
                    enqueue( learnt_clause[ 0 ], no_reason );
                else
                {
                    const auto c = alloc( learnt_clause, true );
                    learnts.push_back( c );
                    attach( c );
                    bump_clause( c );
                    enqueue( learnt_clause[ 0 ], c );
                }
                var_inc /= var_decay;
                cla_inc /= cla_decay;

                if ( ( stats.conflicts & 63 ) == 0 && out_of_budget() )
                    return status::budget_exhausted;
                continue;
            }

            if ( conflicts_here >= conflicts_allowed )
            {
                cancel_until( 0 );
                ++stats.restarts;
                return status::budget_exhausted; // restart signal, filtered by caller
            }
            if ( limits.max_conflicts >= 0 && stats.conflicts >= static_cast< std::uint64_t >( limits.max_conflicts ) )
                return status::budget_exhausted;

            if ( decision_level() == 0 )
                simplify_in_search();
            if ( static_cast< double >( learnts.size() ) - static_cast< double >( trail.size() ) >= max_learnts )
                reduce_db();

            lit next{};
            bool have_next = false;
            while ( decision_level() < static_cast< int >( assumptions.size() ) )
            {
                const lit p = assumptions[ static_cast< std::size_t >( decision_level() ) ];
                const auto v = value( p );
                if ( v == l_true )
                    trail_lim.push_back( trail.size() );
                else if ( v == l_false )
                {
                    analyze_final( p );
                    return status::unsatisfiable;
                }
                else
                {
                    next = p;
                    have_next = true;
                    break;
                }
            }
            if ( !have_next )
            {
                next = pick_branch();
                if ( next.code() == std::numeric_limits< std::uint32_t >::max() )
                    return status::satisfiable;
            }
            trail_lim.push_back( trail.size() );
            enqueue( next, no_reason );
        }
    }

    void simplify_in_search()
    {
        if ( trail.size() != simp_trail && ok )
        {
            remove_satisfied( learnts );
            remove_satisfied( originals );
            simp_trail = trail.size();
        }
    }

    status solve( std::span< const lit > assumptions )
    {
        ++stats.solves;
        conflict_core.clear();
        model.clear();
        for ( const auto l : assumptions )
            if ( l.variable() >= nvars() )
                throw error( "assumption over unallocated variable " + std::to_string( l.variable() ) );
        if ( !ok )
            return status::unsatisfiable;
        if ( out_of_budget() )
            return status::budget_exhausted;

        simplify();
        if ( !ok )
            return status::unsatisfiable;

        max_learnts = std::max( 2000.0, static_cast< double >( originals.size() ) / 3.0 );
        status result = status::budget_exhausted;
        int round = 0;
        for ( ;; )
        {
            const auto allowed = static_cast< std::int64_t >( luby( 2.0, round++ ) * 100.0 );
            result = search( assumptions, allowed );
            if ( result != status::budget_exhausted )
                break;
            // Distinguish a restart from a real budget stop.
            if ( out_of_budget() )
                break;
            max_learnts *= 1.05;
        }

        if ( result == status::satisfiable )
        {
            model.assign( assigns.begin(), assigns.end() );
        }
        else if ( result == status::unsatisfiable && !ok )
        {
            conflict_core.clear();
        }
        cancel_until( 0 );
        return result;
    }

    void write_dimacs( std::ostream& out ) const
    {
        std::size_t units = 0;
        for ( std::size_t i = 0; i < trail.size() && ( trail_lim.empty() || i < trail_lim[ 0 ] ); ++i )
            ++units;
        std::size_t live = 0;
        for ( const auto c : originals )
            if ( !deleted( c ) )
                ++live;
        out << "p cnf " << nvars() << ' ' << ( live + units + ( ok ? 0 : 1 ) ) << '\n';
        for ( std::size_t i = 0; i < units; ++i )
            out << trail[ i ].dimacs() << " 0\n";
        for ( const auto c : originals )
        {
            if ( deleted( c ) )
                continue;
            for ( std::uint32_t k = 0; k < size( c ); ++k )
                out << at( c, k ).dimacs() << ' ';
            out << "0\n";
        }
        if ( !ok )
            out << "0\n";
    }
};

solver::solver() : _impl{ std::make_unique< solver_impl >() } {}
solver::~solver() = default;
solver::solver( solver&& ) noexcept = default;
solver& solver::operator=( solver&& ) noexcept = default;

var solver::new_var() { return _impl->new_var(); }

void solver::reserve_vars( std::uint32_t count )
{
    while ( _impl->nvars() < count )
        _impl->new_var();
}

std::uint32_t solver::num_vars() const { return _impl->nvars(); }

void solver::add_clause( std::span< const lit > lits ) { _impl->add_clause( lits ); }

void solver::add_clause( std::initializer_list< lit > lits )
{
    _impl->add_clause( std::span< const lit >{ lits.begin(), lits.size() } );
}

status solver::solve( std::span< const lit > assumptions ) { return _impl->solve( assumptions ); }

status solver::solve( std::initializer_list< lit > assumptions )
{
    return _impl->solve( std::span< const lit >{ assumptions.begin(), assumptions.size() } );
}

bool solver::model_value( lit l ) const
{
    const auto v = l.variable();
    if ( v >= _impl->model.size() )
        return false;
    const bool positive = _impl->model[ v ] == l_true;
    return positive != l.is_negative();
}

const std::vector< lit >& solver::core() const { return _impl->conflict_core; }

void solver::set_budget( const budget& b ) { _impl->limits = b; }

const statistics& solver::stats() const { return _impl->stats; }

void solver::write_dimacs( std::ostream& out ) const { _impl->write_dimacs( out ); }

} // namespace pdrc::sat
