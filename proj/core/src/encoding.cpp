#include "pdrc/encoding.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <string>

namespace pdrc::encoding
{

lit bit_map::location( std::size_t automaton, std::size_t loc ) const
{
    return lit::positive( locations.at( automaton ).bit( static_cast< std::uint32_t >( loc ) ) );
}

lit bit_map::event( std::size_t e ) const
{
    if ( e >= events.size )
        throw contract_violation( "event index out of range" );
    return lit::positive( events.bit( static_cast< std::uint32_t >( e ) ) );
}

threshold bit_map::at_least( std::size_t variable, long value ) const
{
    const long lo = var_min.at( variable );
    const long hi = var_max[ variable ];
    if ( value <= lo )
        return true;
    if ( value > hi )
        return false;
    return lit::positive( variables[ variable ].bit( static_cast< std::uint32_t >( value - lo - 1 ) ) );
}

cube bit_map::prime( const cube& c ) const
{
    std::vector< lit > out;
    out.reserve( c.size() );
    for ( auto l : c.lits )
    {
        if ( !is_current( l.variable() ) )
            throw contract_violation( "priming a literal that is not a current-state bit" );
        out.push_back( prime( l ) );
    }
    return cube{ std::move( out ) };
}

clause bit_map::prime( const clause& c ) const
{
    std::vector< lit > out;
    out.reserve( c.size() );
    for ( auto l : c.lits )
    {
        if ( !is_current( l.variable() ) )
            throw contract_violation( "priming a literal that is not a current-state bit" );
        out.push_back( prime( l ) );
    }
    return clause{ std::move( out ) };
}

bit_map::bit_info bit_map::describe( sat::var b ) const
{
    for ( std::size_t a = 0; a < locations.size(); ++a )
        if ( locations[ a ].contains( b ) )
            return { bit_kind::location, a, b - locations[ a ].first };
    for ( std::size_t v = 0; v < variables.size(); ++v )
        if ( variables[ v ].contains( b ) )
            return { bit_kind::variable, v, b - variables[ v ].first };
    if ( events.contains( b ) )
        return { bit_kind::event, 0, b - events.first };
    throw contract_violation( "bit " + std::to_string( b ) + " is not a current-state bit" );
}

std::vector< clause > symbolic_system::primed( const std::vector< clause >& cs ) const
{
    std::vector< clause > out;
    out.reserve( cs.size() );
    for ( const auto& c : cs )
        out.push_back( map.prime( c ) );
    return out;
}

std::vector< clause > symbolic_system::invariant() const
{
    auto out = state_invariant;
    out.insert( out.end(), event_invariant.begin(), event_invariant.end() );
    return out;
}

void symbolic_system::load( sat::solver& s ) const
{
    s.reserve_vars( num_vars );
    for ( const auto* group : { &definitions, &trans_c, &trans_u } )
        for ( const auto& c : *group )
            s.add_clause( c );
    for ( const auto& c : invariant() )
    {
        s.add_clause( c );
        s.add_clause( map.prime( c ) );
    }
}

namespace
{

// Plaisted-Greenbaum gate construction: each gate g only gets the clauses for
// g -> f, which suffices because every root is used positively.
class gate_builder
{
public:
    gate_builder( std::uint32_t& next_var, lit truth, std::vector< clause >& out )
        : _next{ next_var }, _true{ truth }, _out{ out }
    {
    }

    [[nodiscard]] lit truth() const { return _true; }
    [[nodiscard]] lit falsity() const { return ~_true; }
    [[nodiscard]] lit constant( bool b ) const { return b ? _true : ~_true; }
    [[nodiscard]] lit as_lit( const threshold& t ) const
    {
        if ( const auto* b = std::get_if< bool >( &t ) )
            return constant( *b );
        return std::get< lit >( t );
    }

    lit conj( std::vector< lit > ls )
    {
        std::vector< std::vector< lit > > cls;
        cls.reserve( ls.size() );
        for ( auto l : ls )
            cls.push_back( { l } );
        return clauses( std::move( cls ) );
    }

    lit disj( std::vector< lit > ls ) { return clauses( { std::move( ls ) } ); }

    // g -> every clause in `cls`.
    lit clauses( std::vector< std::vector< lit > > cls )
    {
        std::vector< std::vector< lit > > kept;
        for ( auto& c : cls )
        {
            std::vector< lit > lits;
            bool satisfied = false;
            for ( auto l : c )
            {
                if ( l == _true )
                    satisfied = true;
                else if ( l != ~_true )
                    lits.push_back( l );
            }
            if ( satisfied )
                continue;
            std::sort( lits.begin(), lits.end() );
            lits.erase( std::unique( lits.begin(), lits.end() ), lits.end() );
            for ( std::size_t i = 1; i < lits.size(); ++i )
                if ( lits[ i ] == ~lits[ i - 1 ] )
                    satisfied = true;
            if ( satisfied )
                continue;
            if ( lits.empty() )
                return falsity();
            kept.push_back( std::move( lits ) );
        }
        std::sort( kept.begin(), kept.end() );
        kept.erase( std::unique( kept.begin(), kept.end() ), kept.end() );
        if ( kept.empty() )
            return truth();
        if ( kept.size() == 1 && kept.front().size() == 1 )
            return kept.front().front();

        const lit g = lit::positive( _next++ );
        for ( auto& c : kept )
        {
            c.push_back( ~g );
            _out.emplace_back( std::move( c ) );
        }
        return g;
    }

    // Clauses for a <-> b (not gated).
    static void iff( std::vector< std::vector< lit > >& out, lit a, lit b )
    {
        out.push_back( { ~a, b } );
        out.push_back( { a, ~b } );
    }

private:
    std::uint32_t& _next;
    lit _true;
    std::vector< clause >& _out;
};

class encoder
{
public:
    encoder( const model::system& sys, symbolic_system& out ) : _sys{ sys }, _out{ out } {}

    void run( const encode_options& options )
    {
        layout( options );
        _next = 2 * _out.map.state_bits;
        _out.constant_true = lit::positive( _next++ );
        _out.definitions.push_back( clause{ { _out.constant_true } } );

        index_participation();
        build_init();
        build_invariant();
        build_property();
        // Uncontrollable cone first: its gate numbering then does not depend
        // on controllable guards, so strengthening leaves it byte-identical.
        build_cone( false );
        build_cone( true );

        gate_builder defs{ _next, _out.constant_true, _out.definitions };
        _out.ind_any = defs.disj( { _out.ind_c, _out.ind_u } );
        _out.num_vars = _next;
    }

private:
    const bit_map& map() const { return _out.map; }

    void layout( const encode_options& options )
    {
        auto& m = _out.map;
        std::uint64_t next = 0;
        for ( const auto& a : _sys.automata )
        {
            m.locations.push_back( { static_cast< std::uint32_t >( next ), static_cast< std::uint32_t >( a.locations.size() ) } );
            next += a.locations.size();
        }
        for ( const auto& v : _sys.variables )
        {
            const auto width = static_cast< std::uint64_t >( v.max - v.min );
            if ( width > options.max_state_bits )
                throw capacity_error( "variable '" + v.name + "' needs too many unary bits" );
            m.variables.push_back( { static_cast< std::uint32_t >( next ), static_cast< std::uint32_t >( width ) } );
            m.var_min.push_back( v.min );
            m.var_max.push_back( v.max );
            next += width;
            if ( next > options.max_state_bits )
                break;
        }
        m.events = { static_cast< std::uint32_t >( next ), static_cast< std::uint32_t >( _sys.events.size() ) };
        next += _sys.events.size();
        if ( next > options.max_state_bits )
            throw capacity_error( "encoding needs " + std::to_string( next ) + " state bits, limit is " +
                                  std::to_string( options.max_state_bits ) );
        m.state_bits = static_cast< std::uint32_t >( next );
        for ( const auto& e : _sys.events )
            _out.controllable.push_back( e.controllable );
    }

    void index_participation()
    {
        const auto ne = _sys.events.size();
        _participants.assign( ne, {} );
        _by_event.assign( _sys.automata.size(), std::vector< std::vector< std::size_t > >( ne ) );
        _touched.assign( _sys.automata.size(), std::vector< std::vector< bool > >( ne, std::vector< bool >( _sys.variables.size() ) ) );
        for ( std::size_t a = 0; a < _sys.automata.size(); ++a )
        {
            const auto& aut = _sys.automata[ a ];
            for ( std::size_t t = 0; t < aut.transitions.size(); ++t )
            {
                const auto e = *_sys.event_index( aut.transitions[ t ].event );
                _by_event[ a ][ e ].push_back( t );
                for ( const auto& u : aut.transitions[ t ].updates )
                    _touched[ a ][ e ][ *_sys.variable_index( u.var ) ] = true;
            }
            for ( std::size_t e = 0; e < ne; ++e )
                if ( aut.declares( _sys.events[ e ].name ) )
                    _participants[ e ].push_back( a );
        }
    }

    void build_init()
    {
        const auto s = model::initial_state( _sys );
        const auto bits = encode_state( map(), s );
        const auto event_first = map().events.first;
        for ( std::uint32_t b = 0; b < event_first; ++b )
            _out.init.push_back( clause{ { lit{ b, !bits[ b ] } } } );
    }

    void build_invariant()
    {
        auto one_hot = []( const bit_block& block, std::vector< clause >& out ) {
            std::vector< lit > some;
            for ( std::uint32_t i = 0; i < block.size; ++i )
                some.push_back( lit::positive( block.bit( i ) ) );
            out.emplace_back( some );
            for ( std::uint32_t i = 0; i < block.size; ++i )
                for ( std::uint32_t j = i + 1; j < block.size; ++j )
                    out.push_back( clause{ { lit::negative( block.bit( i ) ), lit::negative( block.bit( j ) ) } } );
        };
        for ( const auto& block : map().locations )
            one_hot( block, _out.state_invariant );
        for ( const auto& block : map().variables )
            for ( std::uint32_t i = 0; i + 1 < block.size; ++i )
                _out.state_invariant.push_back(
                    clause{ { lit::negative( block.bit( i + 1 ) ), lit::positive( block.bit( i ) ) } } );
        if ( map().events.size > 0 )
            one_hot( map().events, _out.event_invariant );
    }

    std::size_t var_id( const std::string& name ) const { return *_sys.variable_index( name ); }

    lit compare( gate_builder& g, std::size_t v, model::cmp_op op, long c ) const
    {
        using model::cmp_op;
        auto ge = [ & ]( long k ) { return g.as_lit( map().at_least( v, k ) ); };
        // Saturate so c + 1 never overflows; domains are far from LONG_MAX.
        const long next = c == std::numeric_limits< long >::max() ? c : c + 1;
        switch ( op )
        {
        case cmp_op::eq: return g.conj( { ge( c ), ~ge( next ) } );
        case cmp_op::ne: return g.disj( { ~ge( c ), ge( next ) } );
        case cmp_op::lt: return ~ge( c );
        case cmp_op::le: return ~ge( next );
        case cmp_op::gt: return ge( next );
        case cmp_op::ge: return ge( c );
        }
        return g.falsity();
    }

    lit guard_lit( gate_builder& g, const model::guard& expr, bool positive ) const
    {
        return std::visit(
            [ & ]( const auto& n ) -> lit {
                using T = std::decay_t< decltype( n ) >;
                if constexpr ( std::is_same_v< T, model::guard::constant > )
                    return g.constant( n.value == positive );
                else if constexpr ( std::is_same_v< T, model::guard::var_atom > )
                    return compare( g, var_id( n.var ), positive ? n.op : model::negate( n.op ), n.value );
                else if constexpr ( std::is_same_v< T, model::guard::loc_atom > )
                {
                    const auto a = *_sys.automaton_index( n.automaton );
                    const auto l = *_sys.automata[ a ].location_index( n.location );
                    const auto b = map().location( a, l );
                    return positive ? b : ~b;
                }
                else if constexpr ( std::is_same_v< T, model::guard::negation > )
                    return guard_lit( g, n.child, !positive );
                else
                {
                    std::vector< lit > parts;
                    for ( const auto& c : n.children )
                        parts.push_back( guard_lit( g, c, positive ) );
                    return n.conjunction == positive ? g.conj( std::move( parts ) ) : g.disj( std::move( parts ) );
                }
            },
            expr.get() );
    }

    // Current-state condition under which `u` stays inside the domain.
    lit domain_lit( gate_builder& g, const model::update& u, bool positive ) const
    {
        const auto v = var_id( u.var );
        const auto& d = _sys.variables[ v ];
        switch ( u.how )
        {
        case model::update::kind::keep: return g.constant( positive );
        case model::update::kind::assign: return g.constant( ( u.value >= d.min && u.value <= d.max ) == positive );
        case model::update::kind::offset:
        {
            const auto low = g.as_lit( map().at_least( v, d.min - u.value ) );
            const auto high = g.as_lit( map().at_least( v, d.max - u.value + 1 ) );
            return positive ? g.conj( { low, ~high } ) : g.disj( { ~low, high } );
        }
        }
        return g.falsity();
    }

    // x' as a function of x, one iff per unary bit.
    void next_value( gate_builder& g, std::size_t v, const model::update& u, std::vector< std::vector< lit > >& out ) const
    {
        const auto& block = map().variables[ v ];
        const long lo = map().var_min[ v ];
        for ( std::uint32_t i = 0; i < block.size; ++i )
        {
            const lit next = map().prime( lit::positive( block.bit( i ) ) );
            const long threshold_value = lo + static_cast< long >( i ) + 1;
            lit rhs;
            switch ( u.how )
            {
            case model::update::kind::assign: rhs = g.constant( u.value >= threshold_value ); break;
            case model::update::kind::keep: rhs = lit::positive( block.bit( i ) ); break;
            case model::update::kind::offset: rhs = g.as_lit( map().at_least( v, threshold_value - u.value ) ); break;
            }
            gate_builder::iff( out, next, rhs );
        }
    }

    lit frame_location( gate_builder& g, std::size_t a, std::map< std::size_t, lit >& cache ) const
    {
        if ( auto it = cache.find( a ); it != cache.end() )
            return it->second;
        std::vector< std::vector< lit > > cls;
        const auto& block = map().locations[ a ];
        for ( std::uint32_t i = 0; i < block.size; ++i )
        {
            const lit cur = lit::positive( block.bit( i ) );
            gate_builder::iff( cls, map().prime( cur ), cur );
        }
        return cache[ a ] = g.clauses( std::move( cls ) );
    }

    lit frame_variable( gate_builder& g, std::size_t v, std::map< std::size_t, lit >& cache ) const
    {
        if ( auto it = cache.find( v ); it != cache.end() )
            return it->second;
        std::vector< std::vector< lit > > cls;
        next_value( g, v, { _sys.variables[ v ].name, model::update::kind::keep, 0 }, cls );
        return cache[ v ] = g.clauses( std::move( cls ) );
    }

    lit transition_gate( gate_builder& g, std::size_t a, std::size_t e, std::size_t t ) const
    {
        const auto& aut = _sys.automata[ a ];
        const auto& tr = aut.transitions[ t ];
        const auto from = *aut.location_index( tr.from );
        const auto to = *aut.location_index( tr.to );

        std::vector< std::vector< lit > > cls;
        cls.push_back( { map().location( a, from ) } );
        cls.push_back( { guard_lit( g, tr.condition, true ) } );
        for ( const auto& u : tr.updates )
            cls.push_back( { domain_lit( g, u, true ) } );
        for ( std::size_t l = 0; l < aut.locations.size(); ++l )
        {
            const lit next = map().prime( map().location( a, l ) );
            cls.push_back( { l == to ? next : ~next } );
        }
        for ( std::size_t v = 0; v < _sys.variables.size(); ++v )
        {
            if ( !_touched[ a ][ e ][ v ] )
                continue;
            model::update u{ _sys.variables[ v ].name, model::update::kind::keep, 0 };
            for ( const auto& candidate : tr.updates )
                if ( candidate.var == u.var )
                    u = candidate;
            next_value( g, v, u, cls );
        }
        return g.clauses( std::move( cls ) );
    }

    void build_cone( bool controllable )
    {
        auto& target = controllable ? _out.trans_c : _out.trans_u;
        gate_builder g{ _next, _out.constant_true, target };
        std::map< std::size_t, lit > location_frames;
        std::map< std::size_t, lit > variable_frames;

        std::vector< lit > events;
        for ( std::size_t e = 0; e < _sys.events.size(); ++e )
        {
            if ( _sys.events[ e ].controllable != controllable || _participants[ e ].empty() )
                continue;
            std::vector< lit > parts{ map().event( e ) };
            std::vector< bool > touched( _sys.variables.size() );
            std::vector< bool > moving( _sys.automata.size() );
            for ( const auto a : _participants[ e ] )
            {
                moving[ a ] = true;
                std::vector< lit > options;
                for ( const auto t : _by_event[ a ][ e ] )
                    options.push_back( transition_gate( g, a, e, t ) );
                parts.push_back( g.disj( std::move( options ) ) );
                for ( std::size_t v = 0; v < touched.size(); ++v )
                    if ( _touched[ a ][ e ][ v ] )
                        touched[ v ] = true;
            }
            for ( std::size_t a = 0; a < moving.size(); ++a )
                if ( !moving[ a ] )
                    parts.push_back( frame_location( g, a, location_frames ) );
            for ( std::size_t v = 0; v < touched.size(); ++v )
                if ( !touched[ v ] )
                    parts.push_back( frame_variable( g, v, variable_frames ) );
            events.push_back( g.conj( std::move( parts ) ) );
        }
        ( controllable ? _out.ind_c : _out.ind_u ) = g.disj( std::move( events ) );
    }

    void build_property()
    {
        gate_builder g{ _next, _out.constant_true, _out.definitions };

        std::vector< lit > bad;
        std::vector< lit > safe;
        for ( std::size_t a = 0; a < _sys.automata.size(); ++a )
            for ( const auto& f : _sys.automata[ a ].forbidden )
            {
                const auto b = map().location( a, *_sys.automata[ a ].location_index( f ) );
                bad.push_back( b );
                safe.push_back( ~b );
            }
        if ( _sys.forbidden )
        {
            bad.push_back( guard_lit( g, *_sys.forbidden, true ) );
            safe.push_back( guard_lit( g, *_sys.forbidden, false ) );
        }
        _out.bad = g.disj( std::move( bad ) );
        _out.safe = g.conj( std::move( safe ) );

        // not_enabled_u: for every uncontrollable event, either it is not the
        // selected event or some participant has no enabled transition.
        std::vector< lit > per_event;
        for ( std::size_t e = 0; e < _sys.events.size(); ++e )
        {
            if ( _sys.events[ e ].controllable || _participants[ e ].empty() )
                continue;
            std::vector< lit > blocked{ ~map().event( e ) };
            for ( const auto a : _participants[ e ] )
            {
                const auto& aut = _sys.automata[ a ];
                std::vector< lit > all_disabled;
                for ( const auto t : _by_event[ a ][ e ] )
                {
                    const auto& tr = aut.transitions[ t ];
                    std::vector< lit > why{ ~map().location( a, *aut.location_index( tr.from ) ),
                                            guard_lit( g, tr.condition, false ) };
                    for ( const auto& u : tr.updates )
                        why.push_back( domain_lit( g, u, false ) );
                    all_disabled.push_back( g.disj( std::move( why ) ) );
                }
                blocked.push_back( g.conj( std::move( all_disabled ) ) );
            }
            per_event.push_back( g.disj( std::move( blocked ) ) );
        }
        _out.not_enabled_u = g.conj( std::move( per_event ) );
    }

    const model::system& _sys;
    symbolic_system& _out;
    std::uint32_t _next = 0;
    std::vector< std::vector< std::size_t > > _participants;
    std::vector< std::vector< std::vector< std::size_t > > > _by_event;
    std::vector< std::vector< std::vector< bool > > > _touched;
};

} // namespace

symbolic_system encode( const model::system& sys, const encode_options& options )
{
    const auto diagnostics = model::validate( sys );
    if ( !diagnostics.empty() )
        throw model::model_error( "invalid system: " + model::to_string( diagnostics.front() ) );
    symbolic_system out;
    out.source = sys;
    encoder{ out.source, out }.run( options );
    return out;
}

std::vector< bool > encode_state( const bit_map& map, const model::explicit_state& s, std::optional< std::size_t > event )
{
    if ( s.locations.size() != map.locations.size() || s.values.size() != map.variables.size() )
        throw contract_violation( "state shape does not match the bit map" );
    std::vector< bool > bits( map.state_bits );
    for ( std::size_t a = 0; a < map.locations.size(); ++a )
        bits[ map.locations[ a ].bit( static_cast< std::uint32_t >( s.locations[ a ] ) ) ] = true;
    for ( std::size_t v = 0; v < map.variables.size(); ++v )
    {
        const auto& block = map.variables[ v ];
        for ( std::uint32_t i = 0; i < block.size; ++i )
            bits[ block.bit( i ) ] = s.values[ v ] >= map.var_min[ v ] + static_cast< long >( i ) + 1;
    }
    if ( event )
        bits[ map.event( *event ).variable() ] = true;
    return bits;
}

cube state_cube( const bit_map& map, const model::explicit_state& s, std::optional< std::size_t > event )
{
    const auto bits = encode_state( map, s, event );
    std::vector< lit > lits;
    for ( std::size_t a = 0; a < map.locations.size(); ++a )
        lits.push_back( map.location( a, static_cast< std::size_t >( s.locations[ a ] ) ) );
    for ( const auto& block : map.variables )
        for ( std::uint32_t i = 0; i < block.size; ++i )
            lits.push_back( lit{ block.bit( i ), !bits[ block.bit( i ) ] } );
    if ( event )
        lits.push_back( map.event( *event ) );
    return cube{ std::move( lits ) };
}

decoded_state decode_state( const bit_map& map, const std::vector< bool >& bits )
{
    if ( bits.size() < map.state_bits )
        throw malformed_assignment( "assignment shorter than the state bit count" );
    decoded_state out;
    auto one_hot = [ & ]( const bit_block& block, const char* what ) -> std::optional< std::size_t > {
        std::optional< std::size_t > hot;
        for ( std::uint32_t i = 0; i < block.size; ++i )
            if ( bits[ block.bit( i ) ] )
            {
                if ( hot )
                    throw malformed_assignment( std::string{ "several bits set in a " } + what + " block" );
                hot = i;
            }
        return hot;
    };
    for ( const auto& block : map.locations )
    {
        const auto hot = one_hot( block, "location" );
        if ( !hot )
            throw malformed_assignment( "no bit set in a location block" );
        out.state.locations.push_back( static_cast< int >( *hot ) );
    }
    for ( std::size_t v = 0; v < map.variables.size(); ++v )
    {
        const auto& block = map.variables[ v ];
        std::uint32_t count = 0;
        while ( count < block.size && bits[ block.bit( count ) ] )
            ++count;
        for ( std::uint32_t i = count; i < block.size; ++i )
            if ( bits[ block.bit( i ) ] )
                throw malformed_assignment( "unary block is not monotone" );
        out.state.values.push_back( map.var_min[ v ] + static_cast< long >( count ) );
    }
    if ( map.events.size > 0 )
    {
        out.event = one_hot( map.events, "event" );
        if ( !out.event )
            throw malformed_assignment( "no bit set in the event block" );
    }
    return out;
}

bool satisfies( const std::vector< bool >& bits, const cube& c )
{
    return std::all_of( c.lits.begin(), c.lits.end(),
                        [ & ]( lit l ) { return bits.at( l.variable() ) != l.is_negative(); } );
}

bool satisfies( const std::vector< bool >& bits, const clause& c )
{
    return std::any_of( c.lits.begin(), c.lits.end(),
                        [ & ]( lit l ) { return bits.at( l.variable() ) != l.is_negative(); } );
}

bool satisfies( const std::vector< bool >& bits, const std::vector< clause >& cs )
{
    return std::all_of( cs.begin(), cs.end(), [ & ]( const clause& c ) { return satisfies( bits, c ); } );
}

predicate cube_to_predicate( const symbolic_system& sym, const cube& c )
{
    const auto& map = sym.map;
    const auto& sys = sym.source;
    predicate out;
    std::map< std::size_t, std::pair< long, long > > bounds;
    for ( auto l : c.lits )
    {
        if ( !map.is_current( l.variable() ) )
            throw contract_violation( "cube mentions a bit that is not a current-state bit" );
        const auto info = map.describe( l.variable() );
        switch ( info.kind )
        {
        case bit_map::bit_kind::location:
            ( l.is_negative() ? out.excluded_locations : out.locations ).emplace_back( info.owner, info.index );
            break;
        case bit_map::bit_kind::event:
            if ( l.is_negative() )
                out.excluded_events.push_back( info.index );
            else
                out.event = info.index;
            break;
        case bit_map::bit_kind::variable:
        {
            const auto v = info.owner;
            auto [ it, fresh ] = bounds.try_emplace( v, map.var_min[ v ], map.var_max[ v ] );
            const long t = map.var_min[ v ] + static_cast< long >( info.index ) + 1;
            if ( l.is_negative() )
                it->second.second = std::min( it->second.second, t - 1 );
            else
                it->second.first = std::max( it->second.first, t );
            break;
        }
        }
    }

    std::vector< model::guard > parts;
    for ( const auto& [ v, range ] : bounds )
    {
        const auto [ lo, hi ] = range;
        out.intervals.push_back( { v, lo, hi } );
        const auto& d = sys.variables[ v ];
        if ( lo > hi )
            parts.push_back( model::guard::falsity() );
        else if ( lo == hi )
            parts.push_back( model::guard::compare( d.name, model::cmp_op::eq, lo ) );
        else
        {
            if ( lo > d.min )
                parts.push_back( model::guard::compare( d.name, model::cmp_op::ge, lo ) );
            if ( hi < d.max )
                parts.push_back( model::guard::compare( d.name, model::cmp_op::le, hi ) );
        }
    }
    out.condition = model::guard::all_of( std::move( parts ) );
    return out;
}

std::string literal_name( const symbolic_system& sym, lit l )
{
    if ( !sym.map.is_current( l.variable() ) )
        throw contract_violation( "only current-state literals have model-level names" );
    const auto info = sym.map.describe( l.variable() );
    std::string body;
    switch ( info.kind )
    {
    case bit_map::bit_kind::location:
        body = sym.source.automata[ info.owner ].name + "@" + sym.source.automata[ info.owner ].locations[ info.index ];
        break;
    case bit_map::bit_kind::event: body = "event=" + sym.source.events[ info.index ].name; break;
    case bit_map::bit_kind::variable:
        body = sym.source.variables[ info.owner ].name + ">=" +
               std::to_string( sym.map.var_min[ info.owner ] + static_cast< long >( info.index ) + 1 );
        break;
    }
    return l.is_negative() ? "!" + body : body;
}

std::variant< bool, lit > parse_literal( const symbolic_system& sym, std::string_view name )
{
    const auto original = name;
    const bool negative = !name.empty() && name.front() == '!';
    if ( negative )
        name.remove_prefix( 1 );
    auto fail = [ & ]() -> std::variant< bool, lit > {
        throw model::model_error( "unknown literal '" + std::string{ original } + "'" );
    };
    auto sign = [ & ]( threshold t ) -> std::variant< bool, lit > {
        if ( const auto* b = std::get_if< bool >( &t ) )
            return *b != negative;
        const auto l = std::get< lit >( t );
        return negative ? ~l : l;
    };

    if ( name.substr( 0, 6 ) == "event=" )
    {
        const auto e = sym.source.event_index( name.substr( 6 ) );
        if ( !e )
            return fail();
        return sign( sym.map.event( *e ) );
    }
    if ( const auto at = name.find( '@' ); at != std::string_view::npos )
    {
        const auto a = sym.source.automaton_index( name.substr( 0, at ) );
        if ( !a )
            return fail();
        const auto l = sym.source.automata[ *a ].location_index( name.substr( at + 1 ) );
        if ( !l )
            return fail();
        return sign( sym.map.location( *a, *l ) );
    }
    if ( const auto ge = name.find( ">=" ); ge != std::string_view::npos )
    {
        const auto v = sym.source.variable_index( name.substr( 0, ge ) );
        if ( !v )
            return fail();
        const auto digits = name.substr( ge + 2 );
        long k = 0;
        const auto [ ptr, ec ] = std::from_chars( digits.data(), digits.data() + digits.size(), k );
        if ( ec != std::errc{} || ptr != digits.data() + digits.size() )
            return fail();
        return sign( sym.map.at_least( *v, k ) );
    }
    return fail();
}

std::string cube_text( const symbolic_system& sym, const cube& c )
{
    std::string out = "{";
    for ( std::size_t i = 0; i < c.lits.size(); ++i )
    {
        if ( i )
            out += ", ";
        out += literal_name( sym, c.lits[ i ] );
    }
    return out + "}";
}

} // namespace pdrc::encoding
