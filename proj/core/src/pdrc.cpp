#include "pdrc/pdrc.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <ostream>

namespace pdrc
{

using encoding::symbolic_system;

bool disabled_by( const supervisor& sup, const std::vector< bool >& bits )
{
    return std::any_of( sup.cubes.begin(), sup.cubes.end(),
                        [ & ]( const forbidden_cube& f ) { return encoding::satisfies( bits, f.t ); } );
}

namespace
{

cube without_events( const encoding::bit_map& map, const cube& c )
{
    std::vector< lit > out;
    for ( auto l : c.lits )
        if ( !map.events.contains( l.variable() ) )
            out.push_back( l );
    return cube{ std::move( out ) };
}

} // namespace

class engine_impl
{
public:
    engine_impl( const symbolic_system& sym, const options& opts ) : _sym{ sym }, _opts{ opts }, _sem{ _sym.source }
    {
        _sym.load( _solver );
        _act.push_back( fresh() );
        for ( const auto& c : _sym.init )
            add_guarded( _act[ 0 ], c );
        _act.push_back( fresh() );
        _frames.resize( 2 );

        sat::budget b;
        b.max_conflicts = opts.max_conflicts;
        if ( opts.max_seconds )
            b.deadline = std::chrono::steady_clock::now() +
                         std::chrono::duration_cast< std::chrono::steady_clock::duration >(
                             std::chrono::duration< double >( std::max( 0.0, *opts.max_seconds ) ) );
        _solver.set_budget( b );

        const double pairs = _sem.state_count() * static_cast< double >( std::max< std::size_t >( 1, _sym.source.events.size() ) );
        _pair_count = pairs;
        _frame_bound = pairs + 2;
    }

    // ---- queries ------------------------------------------------------

    lit fresh() { return lit::positive( _solver.new_var() ); }

    void add_guarded( lit act, const clause& c )
    {
        std::vector< lit > lits = c.lits;
        lits.push_back( ~act );
        _solver.add_clause( std::span< const lit >{ lits } );
    }

    // Activation literal for a temporary clause; retire() disables it for good.
    lit temporary( const clause& c )
    {
        const auto a = fresh();
        add_guarded( a, c );
        return a;
    }
    void retire( lit a ) { _solver.add_clause( { ~a } ); }

    std::size_t top() const { return _frames.size() - 1; }

    void frame_assumptions( std::size_t k, std::vector< lit >& out ) const
    {
        if ( k == 0 )
        {
            out.push_back( _act[ 0 ] );
            return;
        }
        for ( std::size_t j = k; j <= top(); ++j )
            out.push_back( _act[ j ] );
    }

    bool sat( const std::vector< lit >& assumptions, long frame, const char* cone, const cube* shown = nullptr )
    {
        const auto status = _solver.solve( std::span< const lit >{ assumptions } );
        if ( status == sat::status::budget_exhausted )
            throw engine::out_of_budget{ "solver budget exhausted" };
        const bool yes = status == sat::status::satisfiable;
        if ( _opts.run_log )
        {
            nlohmann::ordered_json rec;
            rec[ "frame" ] = frame;
            rec[ "cone" ] = cone;
            rec[ "verdict" ] = yes ? "sat" : "unsat";
            rec[ "cube" ] = shown ? encoding::cube_text( _sym, *shown ) : "";
            *_opts.run_log << rec.dump() << '\n';
        }
        return yes;
    }

    std::set< lit > core_set() const
    {
        const auto& c = _solver.core();
        return { c.begin(), c.end() };
    }

    std::vector< bool > current_bits( bool primed = false ) const
    {
        std::vector< bool > bits( _sym.map.state_bits );
        const sat::var offset = primed ? _sym.map.state_bits : 0;
        for ( sat::var b = 0; b < _sym.map.state_bits; ++b )
            bits[ b ] = _solver.model_value( b + offset );
        return bits;
    }

    // Positive one-hot bits plus every unary bit of the model.
    cube projection( bool primed = false ) const
    {
        const auto bits = current_bits( primed );
        std::vector< lit > lits;
        const auto& map = _sym.map;
        auto hot = [ & ]( const encoding::bit_block& block ) {
            for ( std::uint32_t i = 0; i < block.size; ++i )
                if ( bits[ block.bit( i ) ] )
                    lits.push_back( lit::positive( block.bit( i ) ) );
        };
        for ( const auto& block : map.locations )
            hot( block );
        for ( const auto& block : map.variables )
            for ( std::uint32_t i = 0; i < block.size; ++i )
                lits.push_back( lit{ block.bit( i ), !bits[ block.bit( i ) ] } );
        hot( map.events );
        return cube{ std::move( lits ) };
    }

    std::vector< lit > primed( const cube& c ) const { return _sym.map.prime( c ).lits; }

    // ---- generalisation ----------------------------------------------

    enum class order_kind
    {
        variables_event_locations,
        variables_locations,
    };

    std::vector< lit > drop_order( const cube& c, order_kind kind ) const
    {
        std::vector< lit > vars, events, locs;
        for ( auto l : c.lits )
        {
            switch ( _sym.map.describe( l.variable() ).kind )
            {
            case encoding::bit_map::bit_kind::variable: vars.push_back( l ); break;
            case encoding::bit_map::bit_kind::event: events.push_back( l ); break;
            case encoding::bit_map::bit_kind::location: locs.push_back( l ); break;
            }
        }
        std::vector< lit > out = vars;
        if ( kind == order_kind::variables_event_locations )
            out.insert( out.end(), events.begin(), events.end() );
        out.insert( out.end(), locs.begin(), locs.end() );
        return out;
    }

    // Greedy literal dropping. `holds` answers for a candidate and reports the
    // literals it actually needed; the candidate shrinks to those (plus the
    // literals never offered for dropping).
    template < typename Check >
    cube drop_literals( const cube& start, order_kind kind, Check holds )
    {
        std::vector< lit > current = start.lits;
        const auto order = drop_order( start, kind );
        std::set< lit > fixed( current.begin(), current.end() );
        for ( auto l : order )
            fixed.erase( l );

        for ( auto l : order )
        {
            auto it = std::find( current.begin(), current.end(), l );
            if ( it == current.end() )
                continue;
            std::vector< lit > candidate = current;
            candidate.erase( candidate.begin() + ( it - current.begin() ) );
            std::set< lit > needed;
            if ( !holds( cube{ candidate }, needed ) )
                continue;
            std::vector< lit > shrunk;
            for ( auto x : candidate )
                if ( fixed.count( x ) || needed.count( x ) )
                    shrunk.push_back( x );
            current = std::move( shrunk );
        }
        return cube{ std::move( current ) };
    }

    // Literals of `c` (current-state) found in a core of primed or plain
    // assumptions.
    void collect_core( const cube& c, bool primed_lits, std::set< lit >& needed ) const
    {
        const auto core = core_set();
        for ( auto l : c.lits )
            if ( core.count( primed_lits ? _sym.map.prime( l ) : l ) )
                needed.insert( l );
    }

    cube generalize_bad_state( const cube& minterm )
    {
        return drop_literals( minterm, order_kind::variables_event_locations, [ & ]( const cube& t, std::set< lit >& needed ) {
            std::vector< lit > a{ _sym.safe };
            a.insert( a.end(), t.lits.begin(), t.lits.end() );
            if ( sat( a, -1, "gen-bad", &t ) )
                return false;
            collect_core( t, false, needed );
            return true;
        } );
    }

    cube generalize_preimage( const cube& minterm, const cube& s, bool controllable )
    {
        const auto target = without_events( _sym.map, s );
        const auto outside = temporary( negate( _sym.map.prime( target ) ) );
        auto check = [ & ]( const cube& t, std::set< lit >& needed ) {
            std::vector< lit > a{ outside, controllable ? _sym.ind_c : _sym.ind_u };
            a.insert( a.end(), t.lits.begin(), t.lits.end() );
            if ( sat( a, -1, controllable ? "gen-c" : "gen-u", &t ) )
                return false;
            collect_core( t, false, needed );
            if ( controllable )
                return true;
            std::vector< lit > b{ _sym.not_enabled_u };
            b.insert( b.end(), t.lits.begin(), t.lits.end() );
            if ( sat( b, -1, "gen-u-enabled", &t ) )
                return false;
            collect_core( t, false, needed );
            return true;
        };
        cube result = minterm;
        std::set< lit > ignored;
        if ( check( minterm, ignored ) )
            result = drop_literals( minterm, order_kind::variables_locations, check );
        retire( outside );
        return result;
    }

    // Drops literals of s while I and s stays empty and not s stays inductive
    // relative to R_{k-1}.
    cube generalize_inductive( const cube& s, std::size_t k )
    {
        auto initiation = [ & ]( const cube& c ) {
            std::vector< lit > a;
            frame_assumptions( 0, a );
            a.insert( a.end(), c.lits.begin(), c.lits.end() );
            return !sat( a, 0, "gen-init", &c );
        };
        return drop_literals( s, order_kind::variables_event_locations, [ & ]( const cube& c, std::set< lit >& needed ) {
            if ( !initiation( c ) )
                return false;
            const auto tmp = temporary( negate( c ) );
            std::vector< lit > a;
            frame_assumptions( k - 1, a );
            a.push_back( tmp );
            a.push_back( _sym.ind_any );
            const auto next = primed( c );
            a.insert( a.end(), next.begin(), next.end() );
            const bool inductive = !sat( a, static_cast< long >( k - 1 ), "gen-ind", &c );
            std::set< lit > core_lits;
            if ( inductive )
                collect_core( c, true, core_lits );
            retire( tmp );
            if ( !inductive )
                return false;
            // The core-reduced cube is still relatively inductive; keep it
            // only if it also respects initiation.
            std::vector< lit > reduced;
            for ( auto l : c.lits )
                if ( core_lits.count( l ) )
                    reduced.push_back( l );
            if ( initiation( cube{ reduced } ) )
                needed = std::move( core_lits );
            else
                needed.insert( c.lits.begin(), c.lits.end() );
            return true;
        } );
    }

    // ---- main algorithm ----------------------------------------------

    std::optional< counterexample > initial_violation()
    {
        std::vector< lit > a;
        frame_assumptions( 0, a );
        a.push_back( _sym.bad );
        if ( !sat( a, 0, "init-bad" ) )
            return std::nullopt;
        counterexample cex;
        const auto init = model::initial_state( _sym.source );
        cex.cubes.push_back( encoding::state_cube( _sym.map, init ) );
        cex.states.push_back( init );
        return cex;
    }

    void blocking_phase()
    {
        for ( ;; )
        {
            std::vector< lit > a;
            frame_assumptions( _n, a );
            a.push_back( _sym.bad );
            if ( !sat( a, static_cast< long >( _n ), "bad" ) )
                return;
            const auto s = generalize_bad_state( projection() );
            block( s, _n );
        }
    }

    void add_supervisor_cube( const cube& t, std::size_t k, const cube& s )
    {
        _solver.add_clause( clause{ [ & ] {
            auto lits = negate( t ).lits;
            lits.push_back( ~_sym.ind_c );
            return lits;
        }() } );
        _sup.cubes.push_back( { t, k, s, encoding::cube_to_predicate( _sym, t ) } );
    }

    void block( const cube& s, std::size_t k )
    {
        if ( k < 1 || k > _n )
            throw invariant_violation( "block called outside 1..N" );
        _stack.push_back( s );
        const auto outside_s = temporary( negate( s ) );
        const auto s_next = primed( s );

        auto preimage_query = [ & ]( lit indicator, const char* cone ) {
            std::vector< lit > a;
            frame_assumptions( k - 1, a );
            a.push_back( outside_s );
            a.push_back( indicator );
            a.insert( a.end(), s_next.begin(), s_next.end() );
            return sat( a, static_cast< long >( k - 1 ), cone, &s );
        };

        while ( preimage_query( _sym.ind_c, "c" ) )
        {
            const auto t = generalize_preimage( projection(), s, true );
            add_supervisor_cube( t, k, s );
        }

        while ( preimage_query( _sym.ind_u, "u" ) )
        {
            const auto m = projection();
            if ( k == 1 )
            {
                retire( outside_s );
                throw engine::found_uncontrollable{ make_path( m ) };
            }
            const auto t = generalize_preimage( m, s, false );
            std::vector< lit > a;
            frame_assumptions( 0, a );
            a.insert( a.end(), t.lits.begin(), t.lits.end() );
            if ( sat( a, 0, "init-meets", &t ) )
            {
                retire( outside_s );
                throw engine::found_uncontrollable{ make_path( t ) };
            }
            block( t, k - 1 );
        }
        retire( outside_s );

        const auto c = _opts.inductive_generalization ? generalize_inductive( s, k ) : s;
        if ( _opts.debug_invariants )
        {
            std::vector< lit > a;
            frame_assumptions( 0, a );
            a.insert( a.end(), c.lits.begin(), c.lits.end() );
            if ( sat( a, 0, "audit-init" ) )
                throw invariant_violation( "blocked cube intersects the initial states" );
        }
        const auto blocked = negate( c );
        for ( std::size_t i = 1; i <= k; ++i )
            _frames[ i ].insert( blocked );
        add_guarded( _act[ k ], blocked );
        ++_stats.clauses_learned;
        _stack.pop_back();
    }

    // Forward replay from an initial cube through the recursion stack.
    counterexample make_path( const cube& first )
    {
        counterexample cex;
        std::vector< cube > chain{ first };
        for ( auto it = _stack.rbegin(); it != _stack.rend(); ++it )
            chain.push_back( *it );

        std::vector< lit > a;
        frame_assumptions( 0, a );
        a.insert( a.end(), first.lits.begin(), first.lits.end() );
        if ( !sat( a, 0, "cex-init", &first ) )
            throw invariant_violation( "counterexample start does not meet the initial states" );
        auto here = projection();
        auto decoded = encoding::decode_state( _sym.map, current_bits() );
        cex.cubes.push_back( first );
        cex.states.push_back( decoded.state );

        for ( std::size_t i = 1; i < chain.size(); ++i )
        {
            std::vector< lit > step{ _sym.ind_u };
            step.insert( step.end(), here.lits.begin(), here.lits.end() );
            const auto next = primed( chain[ i ] );
            step.insert( step.end(), next.begin(), next.end() );
            if ( !sat( step, -1, "cex-step", &chain[ i ] ) )
                throw invariant_violation( "counterexample step does not replay" );
            if ( !decoded.event )
                throw invariant_violation( "counterexample state without an event" );
            cex.events.push_back( *decoded.event );
            here = projection( true );
            decoded = encoding::decode_state( _sym.map, current_bits( true ) );
            cex.cubes.push_back( chain[ i ] );
            cex.states.push_back( decoded.state );
        }
        return cex;
    }

    void propagate()
    {
        _frames.emplace_back();
        _act.push_back( fresh() );
        for ( std::size_t k = 1; k <= _n; ++k )
        {
            std::vector< clause > pending;
            for ( const auto& c : _frames[ k ] )
                if ( !_frames[ k + 1 ].count( c ) )
                    pending.push_back( c );
            for ( const auto& c : pending )
            {
                const auto violated = negate( c );
                std::vector< lit > a;
                frame_assumptions( k, a );
                a.push_back( _sym.ind_any );
                const auto next = primed( violated );
                a.insert( a.end(), next.begin(), next.end() );
                if ( sat( a, static_cast< long >( k ), "T", &violated ) )
                    continue;
                _frames[ k + 1 ].insert( c );
                add_guarded( _act[ k + 1 ], c );
                ++_stats.propagated;
            }
        }
    }

    std::optional< std::size_t > check_fixpoint() const
    {
        for ( std::size_t i = 1; i < top(); ++i )
            if ( _frames[ i ] == _frames[ i + 1 ] )
                return i;
        return std::nullopt;
    }

    void advance()
    {
        if ( top() == _n )
        {
            _frames.emplace_back();
            _act.push_back( fresh() );
        }
        ++_n;
    }

    // ---- audits --------------------------------------------------------

    void audit()
    {
        for ( std::size_t i = 1; i < top(); ++i )
            for ( const auto& c : _frames[ i + 1 ] )
                if ( !_frames[ i ].count( c ) )
                    throw invariant_violation( "frame " + std::to_string( i + 1 ) + " is not contained in frame " +
                                               std::to_string( i ) );
        for ( std::size_t i = 0; i <= _n; ++i )
        {
            std::vector< lit > a;
            frame_assumptions( i, a );
            a.push_back( _sym.bad );
            if ( sat( a, static_cast< long >( i ), "audit-safe" ) )
                throw invariant_violation( "frame " + std::to_string( i ) + " contains a bad state" );
        }
        if ( _pair_count <= _opts.explicit_check_limit )
            audit_images();
    }

    bool in_frame( std::size_t i, const std::vector< bool >& bits ) const
    {
        if ( i == 0 )
            return encoding::satisfies( bits, _sym.init );
        return std::all_of( _frames[ i ].begin(), _frames[ i ].end(),
                            [ & ]( const clause& c ) { return encoding::satisfies( bits, c ); } );
    }

    // Explicit image of every R_i under the supervised relation lies in R_{i+1}.
    void audit_images()
    {
        const auto& sys = _sym.source;
        const auto ne = sys.events.size();
        std::vector< std::pair< model::explicit_state, std::optional< std::size_t > > > pairs;
        _sem.for_each_state( [ & ]( const model::explicit_state& s ) {
            if ( ne == 0 )
                pairs.emplace_back( s, std::nullopt );
            for ( std::size_t e = 0; e < ne; ++e )
                pairs.emplace_back( s, e );
        } );
        for ( std::size_t i = 0; i < top(); ++i )
        {
            for ( const auto& [ s, e ] : pairs )
            {
                if ( !e )
                    continue;
                const auto bits = encoding::encode_state( _sym.map, s, e );
                if ( !in_frame( i, bits ) )
                    continue;
                if ( sys.events[ *e ].controllable && disabled_by( _sup, bits ) )
                    continue;
                const auto next = _sem.enabled( s, *e );
                if ( !next )
                    continue;
                for ( std::size_t f = 0; f < ne; ++f )
                    if ( !in_frame( i + 1, encoding::encode_state( _sym.map, *next, f ) ) )
                        throw invariant_violation( "the image of frame " + std::to_string( i ) +
                                                   " leaves frame " + std::to_string( i + 1 ) + " at " +
                                                   model::to_string( sys, *next ) );
            }
        }
    }

    run_stats stats() const
    {
        auto out = _stats;
        out.frames = _n;
        out.supervisor_cubes = _sup.cubes.size();
        out.solver_calls = _solver.stats().solves;
        out.conflicts = _solver.stats().conflicts;
        return out;
    }

    const symbolic_system& _sym;
    options _opts;
    model::semantics _sem;
    sat::solver _solver;
    std::vector< lit > _act;
    std::vector< std::set< clause > > _frames;
    std::size_t _n = 1;
    supervisor _sup;
    run_stats _stats;
    std::vector< cube > _stack;
    double _pair_count = 0;
    double _frame_bound = 0;
};

engine::engine( const symbolic_system& sym, const options& opts ) : _impl{ std::make_unique< engine_impl >( sym, opts ) } {}
engine::~engine() = default;

std::optional< counterexample > engine::initial_violation() { return _impl->initial_violation(); }
void engine::blocking_phase() { _impl->blocking_phase(); }
void engine::block( const cube& s, std::size_t k ) { _impl->block( s, k ); }
void engine::propagate() { _impl->propagate(); }
std::optional< std::size_t > engine::check_fixpoint() const { return _impl->check_fixpoint(); }
void engine::advance() { _impl->advance(); }
cube engine::generalize_bad_state( const cube& m ) { return _impl->generalize_bad_state( m ); }
cube engine::generalize_preimage_c( const cube& m, const cube& s ) { return _impl->generalize_preimage( m, s, true ); }
cube engine::generalize_preimage_u( const cube& m, const cube& s ) { return _impl->generalize_preimage( m, s, false ); }
void engine::audit() { _impl->audit(); }
std::size_t engine::depth() const { return _impl->_n; }
const std::vector< std::set< clause > >& engine::frames() const { return _impl->_frames; }
const supervisor& engine::current_supervisor() const { return _impl->_sup; }
run_stats engine::stats() const { return _impl->stats(); }

synthesis_result synthesize( const symbolic_system& sym, const options& opts )
{
    engine_impl e{ sym, opts };
    try
    {
        if ( auto cex = e.initial_violation() )
            return uncontrollable{ std::move( *cex ), e._sup, e.stats() };
        for ( ;; )
        {
            ++e._stats.iterations;
            if ( opts.max_frames && e._n > *opts.max_frames )
                return inconclusive{ "frame limit reached", e._sup, e.stats() };
            if ( static_cast< double >( e._n ) > e._frame_bound )
                throw invariant_violation( "frame count exceeds the number of (state, event) pairs" );
            e.blocking_phase();
            if ( opts.debug_invariants )
                e.audit();
            e.propagate();
            if ( opts.debug_invariants )
                e.audit();
            if ( const auto i = e.check_fixpoint() )
            {
                controlled out{ e._sup, { e._frames[ *i ].begin(), e._frames[ *i ].end() }, *i, e.stats() };
                return out;
            }
            e.advance();
        }
    }
    catch ( engine::found_uncontrollable& u )
    {
        return uncontrollable{ std::move( u.path ), e._sup, e.stats() };
    }
    catch ( engine::out_of_budget& b )
    {
        return inconclusive{ b.reason, e._sup, e.stats() };
    }
}

} // namespace pdrc
