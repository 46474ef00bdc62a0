#include "pdrc/model.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace pdrc::model
{

std::string_view to_string( cmp_op op )
{
    switch ( op )
    {
    case cmp_op::eq: return "==";
    case cmp_op::ne: return "!=";
    case cmp_op::lt: return "<";
    case cmp_op::le: return "<=";
    case cmp_op::gt: return ">";
    case cmp_op::ge: return ">=";
    }
    return "?";
}

cmp_op negate( cmp_op op )
{
    switch ( op )
    {
    case cmp_op::eq: return cmp_op::ne;
    case cmp_op::ne: return cmp_op::eq;
    case cmp_op::lt: return cmp_op::ge;
    case cmp_op::le: return cmp_op::gt;
    case cmp_op::gt: return cmp_op::le;
    case cmp_op::ge: return cmp_op::lt;
    }
    return op;
}

bool compare( long lhs, cmp_op op, long rhs )
{
    switch ( op )
    {
    case cmp_op::eq: return lhs == rhs;
    case cmp_op::ne: return lhs != rhs;
    case cmp_op::lt: return lhs < rhs;
    case cmp_op::le: return lhs <= rhs;
    case cmp_op::gt: return lhs > rhs;
    case cmp_op::ge: return lhs >= rhs;
    }
    return false;
}

// ---------------------------------------------------------------------------
// guard

guard::guard() : guard{ constant{ true } } {}
guard::guard( node n ) : _node{ std::make_shared< const node >( std::move( n ) ) } {}

guard guard::truth() { return guard{ constant{ true } }; }
guard guard::falsity() { return guard{ constant{ false } }; }

guard guard::compare( std::string var, cmp_op op, long value )
{
    return guard{ var_atom{ std::move( var ), op, value } };
}

guard guard::at( std::string automaton, std::string location )
{
    return guard{ loc_atom{ std::move( automaton ), std::move( location ) } };
}

bool guard::is_true() const
{
    const auto* c = std::get_if< constant >( _node.get() );
    return c && c->value;
}

bool guard::is_false() const
{
    const auto* c = std::get_if< constant >( _node.get() );
    return c && !c->value;
}

guard guard::all_of( std::vector< guard > children )
{
    std::vector< guard > flat;
    for ( auto& child : children )
    {
        if ( child.is_true() )
            continue;
        if ( child.is_false() )
            return falsity();
        const auto* j = std::get_if< junction >( &child.get() );
        if ( j && j->conjunction )
            flat.insert( flat.end(), j->children.begin(), j->children.end() );
        else
            flat.push_back( std::move( child ) );
    }
    if ( flat.empty() )
        return truth();
    if ( flat.size() == 1 )
        return flat.front();
    return guard{ junction{ true, std::move( flat ) } };
}

guard guard::any_of( std::vector< guard > children )
{
    std::vector< guard > flat;
    for ( auto& child : children )
    {
        if ( child.is_false() )
            continue;
        if ( child.is_true() )
            return truth();
        const auto* j = std::get_if< junction >( &child.get() );
        if ( j && !j->conjunction )
            flat.insert( flat.end(), j->children.begin(), j->children.end() );
        else
            flat.push_back( std::move( child ) );
    }
    if ( flat.empty() )
        return falsity();
    if ( flat.size() == 1 )
        return flat.front();
    return guard{ junction{ false, std::move( flat ) } };
}

guard operator&&( const guard& a, const guard& b ) { return guard::all_of( { a, b } ); }
guard operator||( const guard& a, const guard& b ) { return guard::any_of( { a, b } ); }

guard operator!( const guard& a )
{
    if ( const auto* c = std::get_if< guard::constant >( &a.get() ) )
        return guard{ guard::constant{ !c->value } };
    if ( const auto* n = std::get_if< guard::negation >( &a.get() ) )
        return n->child;
    return guard{ guard::negation{ a } };
}

// ---------------------------------------------------------------------------
// declarations

std::optional< std::size_t > automaton::location_index( std::string_view loc ) const
{
    for ( std::size_t i = 0; i < locations.size(); ++i )
        if ( locations[ i ] == loc )
            return i;
    return std::nullopt;
}

bool automaton::declares( std::string_view event ) const
{
    return std::any_of( transitions.begin(), transitions.end(),
                        [ & ]( const transition& t ) { return t.event == event; } );
}

namespace
{

template < typename T >
std::optional< std::size_t > find_named( const std::vector< T >& items, std::string_view name )
{
    for ( std::size_t i = 0; i < items.size(); ++i )
        if ( items[ i ].name == name )
            return i;
    return std::nullopt;
}

} // namespace

std::optional< std::size_t > system::variable_index( std::string_view name ) const { return find_named( variables, name ); }
std::optional< std::size_t > system::event_index( std::string_view name ) const { return find_named( events, name ); }
std::optional< std::size_t > system::automaton_index( std::string_view name ) const { return find_named( automata, name ); }

std::string update_rhs( const update& u )
{
    switch ( u.how )
    {
    case update::kind::assign: return std::to_string( u.value );
    case update::kind::keep: return u.var;
    case update::kind::offset:
        if ( u.value < 0 )
            return u.var + "-" + std::to_string( -u.value );
        return u.var + "+" + std::to_string( u.value );
    }
    return {};
}

std::string to_string( const diagnostic& d )
{
    static constexpr const char* kinds[] = { "declaration", "reference", "domain", "update", "nondeterminism" };
    std::ostringstream out;
    out << kinds[ static_cast< int >( d.what ) ] << ": ";
    if ( !d.automaton.empty() )
    {
        out << d.automaton;
        if ( d.transition )
            out << " transition #" << *d.transition;
        out << ": ";
    }
    out << d.message;
    return out.str();
}

// ---------------------------------------------------------------------------
// validation

namespace
{

bool valid_identifier( std::string_view name )
{
    if ( name.empty() )
        return false;
    auto head = [ & ]( char c ) { return std::isalpha( static_cast< unsigned char >( c ) ) || c == '_'; };
    if ( !head( name.front() ) )
        return false;
    return std::all_of( name.begin(), name.end(), [ & ]( char c ) {
        return std::isalnum( static_cast< unsigned char >( c ) ) || c == '_' || c == '.';
    } );
}

struct guard_refs
{
    std::set< std::string > vars;
    std::set< std::pair< std::string, std::string > > locations;
};

void collect_refs( const guard& g, guard_refs& out )
{
    std::visit(
        [ & ]( const auto& n ) {
            using T = std::decay_t< decltype( n ) >;
            if constexpr ( std::is_same_v< T, guard::var_atom > )
                out.vars.insert( n.var );
            else if constexpr ( std::is_same_v< T, guard::loc_atom > )
                out.locations.emplace( n.automaton, n.location );
            else if constexpr ( std::is_same_v< T, guard::negation > )
                collect_refs( n.child, out );
            else if constexpr ( std::is_same_v< T, guard::junction > )
                for ( const auto& c : n.children )
                    collect_refs( c, out );
        },
        g.get() );
}

class validator
{
public:
    explicit validator( const system& sys ) : _sys{ sys } {}

    std::vector< diagnostic > run()
    {
        check_variables();
        check_events();
        check_automata();
        if ( _sys.forbidden )
            check_guard_refs( *_sys.forbidden, "", std::nullopt, true );
        if ( _out.empty() )
        {
            check_shared_updates();
            check_determinism();
        }
        return std::move( _out );
    }

private:
    void report( diagnostic::kind k, std::string aut, std::optional< std::size_t > t, std::string msg )
    {
        _out.push_back( { k, std::move( aut ), t, std::move( msg ) } );
    }

    void check_variables()
    {
        std::set< std::string > seen;
        for ( const auto& v : _sys.variables )
        {
            if ( !valid_identifier( v.name ) )
                report( diagnostic::kind::declaration, "", std::nullopt, "invalid variable name '" + v.name + "'" );
            if ( !seen.insert( v.name ).second )
                report( diagnostic::kind::declaration, "", std::nullopt, "duplicate variable '" + v.name + "'" );
            if ( v.min > v.max )
                report( diagnostic::kind::domain, "", std::nullopt, "variable '" + v.name + "' has min > max" );
            else if ( v.init < v.min || v.init > v.max )
                report( diagnostic::kind::domain, "", std::nullopt,
                        "variable '" + v.name + "' initial value outside [min, max]" );
        }
    }

    void check_events()
    {
        std::set< std::string > seen;
        for ( const auto& e : _sys.events )
        {
            if ( !valid_identifier( e.name ) )
                report( diagnostic::kind::declaration, "", std::nullopt, "invalid event name '" + e.name + "'" );
            if ( !seen.insert( e.name ).second )
                report( diagnostic::kind::declaration, "", std::nullopt, "duplicate event '" + e.name + "'" );
        }
    }

    void check_guard_refs( const guard& g, const std::string& aut, std::optional< std::size_t > t, bool allow_locations )
    {
        guard_refs refs;
        collect_refs( g, refs );
        for ( const auto& v : refs.vars )
            if ( !_sys.variable_index( v ) )
                report( diagnostic::kind::reference, aut, t, "guard references undeclared variable '" + v + "'" );
        for ( const auto& [ a, l ] : refs.locations )
        {
            if ( !allow_locations )
            {
                report( diagnostic::kind::reference, aut, t, "location atom not allowed here" );
                continue;
            }
            const auto ai = _sys.automaton_index( a );
            if ( !ai )
                report( diagnostic::kind::reference, aut, t, "guard references undeclared automaton '" + a + "'" );
            else if ( !_sys.automata[ *ai ].location_index( l ) )
                report( diagnostic::kind::reference, aut, t, "guard references undeclared location '" + a + "@" + l + "'" );
        }
    }

    void check_automata()
    {
        std::set< std::string > names;
        bool any_transition = false;
        for ( const auto& a : _sys.automata )
        {
            if ( !valid_identifier( a.name ) )
                report( diagnostic::kind::declaration, a.name, std::nullopt, "invalid automaton name" );
            if ( !names.insert( a.name ).second )
                report( diagnostic::kind::declaration, a.name, std::nullopt, "duplicate automaton" );
            if ( a.locations.empty() )
                report( diagnostic::kind::declaration, a.name, std::nullopt, "automaton has no locations" );
            std::set< std::string > locs;
            for ( const auto& l : a.locations )
            {
                if ( !valid_identifier( l ) )
                    report( diagnostic::kind::declaration, a.name, std::nullopt, "invalid location name '" + l + "'" );
                if ( !locs.insert( l ).second )
                    report( diagnostic::kind::declaration, a.name, std::nullopt, "duplicate location '" + l + "'" );
            }
            if ( !a.location_index( a.initial ) )
                report( diagnostic::kind::reference, a.name, std::nullopt,
                        "initial location '" + a.initial + "' is not declared" );
            for ( const auto& f : a.forbidden )
                if ( !a.location_index( f ) )
                    report( diagnostic::kind::reference, a.name, std::nullopt,
                            "forbidden location '" + f + "' is not declared" );

            for ( std::size_t ti = 0; ti < a.transitions.size(); ++ti )
            {
                any_transition = true;
                const auto& t = a.transitions[ ti ];
                if ( !a.location_index( t.from ) )
                    report( diagnostic::kind::reference, a.name, ti, "unknown source location '" + t.from + "'" );
                if ( !a.location_index( t.to ) )
                    report( diagnostic::kind::reference, a.name, ti, "unknown target location '" + t.to + "'" );
                if ( !_sys.event_index( t.event ) )
                    report( diagnostic::kind::reference, a.name, ti, "unknown event '" + t.event + "'" );
                check_guard_refs( t.condition, a.name, ti, true );
                std::set< std::string > assigned;
                for ( const auto& u : t.updates )
                {
                    if ( !_sys.variable_index( u.var ) )
                        report( diagnostic::kind::reference, a.name, ti, "update of undeclared variable '" + u.var + "'" );
                    if ( !assigned.insert( u.var ).second )
                        report( diagnostic::kind::update, a.name, ti, "variable '" + u.var + "' assigned twice" );
                }
            }
        }
        if ( any_transition && _sys.events.empty() )
            report( diagnostic::kind::declaration, "", std::nullopt, "system has transitions but no events" );
    }

    void check_shared_updates()
    {
        // (event, variable) -> automaton that assigns it
        std::map< std::pair< std::string, std::string >, std::string > owner;
        for ( const auto& a : _sys.automata )
            for ( std::size_t ti = 0; ti < a.transitions.size(); ++ti )
                for ( const auto& u : a.transitions[ ti ].updates )
                {
                    const auto key = std::make_pair( a.transitions[ ti ].event, u.var );
                    const auto [ it, inserted ] = owner.emplace( key, a.name );
                    if ( !inserted && it->second != a.name )
                        report( diagnostic::kind::update, a.name, ti,
                                "variable '" + u.var + "' is also assigned by automaton '" + it->second +
                                    "' on shared event '" + key.first + "'" );
                }
    }

    // Two transitions leaving the same location on the same event must never
    // be enabled together. Enumerates the variables and foreign locations the
    // two transitions depend on.
    void check_determinism()
    {
        const semantics sem{ _sys };
        for ( std::size_t ai = 0; ai < _sys.automata.size(); ++ai )
        {
            const auto& a = _sys.automata[ ai ];
            for ( std::size_t i = 0; i < a.transitions.size(); ++i )
                for ( std::size_t j = i + 1; j < a.transitions.size(); ++j )
                {
                    const auto& t1 = a.transitions[ i ];
                    const auto& t2 = a.transitions[ j ];
                    if ( t1.from != t2.from || t1.event != t2.event )
                        continue;
                    if ( overlapping( sem, ai, t1, t2 ) )
                        report( diagnostic::kind::nondeterminism, a.name, j,
                                "transition overlaps with #" + std::to_string( i ) + " on event '" + t1.event +
                                    "' from '" + t1.from + "'" );
                }
        }
    }

    bool overlapping( const semantics& sem, std::size_t ai, const transition& t1, const transition& t2 ) const
    {
        guard_refs refs;
        collect_refs( t1.condition, refs );
        collect_refs( t2.condition, refs );
        for ( const auto* t : { &t1, &t2 } )
            for ( const auto& u : t->updates )
                refs.vars.insert( u.var );

        std::vector< std::size_t > vars;
        for ( const auto& v : refs.vars )
            vars.push_back( *_sys.variable_index( v ) );
        std::vector< std::size_t > auts;
        for ( const auto& [ an, ln ] : refs.locations )
        {
            const auto idx = *_sys.automaton_index( an );
            if ( idx != ai && std::find( auts.begin(), auts.end(), idx ) == auts.end() )
                auts.push_back( idx );
        }

        explicit_state s = initial_state( _sys );
        s.locations[ ai ] = static_cast< int >( *_sys.automata[ ai ].location_index( t1.from ) );

        auto enabled_under = [ & ]( const transition& t ) {
            if ( !sem.holds( t.condition, s ) )
                return false;
            for ( const auto& u : t.updates )
            {
                const auto vi = *_sys.variable_index( u.var );
                const auto& decl = _sys.variables[ vi ];
                long next = s.values[ vi ];
                if ( u.how == update::kind::assign )
                    next = u.value;
                else if ( u.how == update::kind::offset )
                    next += u.value;
                if ( next < decl.min || next > decl.max )
                    return false;
            }
            return true;
        };

        // Odometer over the selected coordinates.
        for ( const auto vi : vars )
            s.values[ vi ] = _sys.variables[ vi ].min;
        for ( const auto a : auts )
            s.locations[ a ] = 0;
        for ( ;; )
        {
            if ( enabled_under( t1 ) && enabled_under( t2 ) )
                return true;
            std::size_t k = 0;
            for ( ; k < vars.size(); ++k )
            {
                const auto vi = vars[ k ];
                if ( s.values[ vi ] < _sys.variables[ vi ].max )
                {
                    ++s.values[ vi ];
                    break;
                }
                s.values[ vi ] = _sys.variables[ vi ].min;
            }
            if ( k < vars.size() )
                continue;
            std::size_t m = 0;
            for ( ; m < auts.size(); ++m )
            {
                const auto a = auts[ m ];
                if ( s.locations[ a ] + 1 < static_cast< int >( _sys.automata[ a ].locations.size() ) )
                {
                    ++s.locations[ a ];
                    break;
                }
                s.locations[ a ] = 0;
            }
            if ( m == auts.size() )
                return false;
        }
    }

    const system& _sys;
    std::vector< diagnostic > _out;
};

} // namespace

std::vector< diagnostic > validate( const system& sys ) { return validator{ sys }.run(); }

// ---------------------------------------------------------------------------
// explicit states

std::size_t explicit_state_hash::operator()( const explicit_state& s ) const noexcept
{
    std::size_t h = 0xcbf29ce484222325ull;
    auto mix = [ & ]( std::uint64_t x ) {
        h ^= x + 0x9e3779b97f4a7c15ull + ( h << 6 ) + ( h >> 2 );
    };
    for ( const auto l : s.locations )
        mix( static_cast< std::uint64_t >( l ) );
    mix( 0xffu );
    for ( const auto v : s.values )
        mix( static_cast< std::uint64_t >( v ) );
    return h;
}

std::string to_string( const system& sys, const explicit_state& s )
{
    std::ostringstream out;
    out << '(';
    for ( std::size_t a = 0; a < s.locations.size(); ++a )
    {
        if ( a )
            out << ',';
        out << sys.automata[ a ].name << '@' << sys.automata[ a ].locations[ static_cast< std::size_t >( s.locations[ a ] ) ];
    }
    for ( std::size_t v = 0; v < s.values.size(); ++v )
        out << ( v == 0 && s.locations.empty() ? "" : ";" ) << sys.variables[ v ].name << '=' << s.values[ v ];
    out << ')';
    return out.str();
}

explicit_state initial_state( const system& sys )
{
    explicit_state s;
    for ( const auto& a : sys.automata )
    {
        const auto idx = a.location_index( a.initial );
        s.locations.push_back( idx ? static_cast< int >( *idx ) : 0 );
    }
    for ( const auto& v : sys.variables )
        s.values.push_back( v.init );
    return s;
}

// ---------------------------------------------------------------------------
// semantics

struct semantics::compiled_guard
{
    enum class kind
    {
        constant,
        var_atom,
        loc_atom,
        negation,
        conjunction,
        disjunction,
    };
    kind what = kind::constant;
    bool value = true;
    std::size_t index = 0;  // variable or automaton
    int location = 0;
    cmp_op op = cmp_op::eq;
    long constant = 0;
    std::vector< compiled_guard > children;
};

namespace
{

using cg = semantics::compiled_guard;

cg compile_node( const system& sys, const guard& g )
{
    cg out;
    std::visit(
        [ & ]( const auto& n ) {
            using T = std::decay_t< decltype( n ) >;
            if constexpr ( std::is_same_v< T, guard::constant > )
            {
                out.what = cg::kind::constant;
                out.value = n.value;
            }
            else if constexpr ( std::is_same_v< T, guard::var_atom > )
            {
                const auto vi = sys.variable_index( n.var );
                if ( !vi )
                    throw model_error( "unknown variable '" + n.var + "' in guard" );
                out.what = cg::kind::var_atom;
                out.index = *vi;
                out.op = n.op;
                out.constant = n.value;
            }
            else if constexpr ( std::is_same_v< T, guard::loc_atom > )
            {
                const auto ai = sys.automaton_index( n.automaton );
                if ( !ai )
                    throw model_error( "unknown automaton '" + n.automaton + "' in guard" );
                const auto li = sys.automata[ *ai ].location_index( n.location );
                if ( !li )
                    throw model_error( "unknown location '" + n.automaton + "@" + n.location + "' in guard" );
                out.what = cg::kind::loc_atom;
                out.index = *ai;
                out.location = static_cast< int >( *li );
            }
            else if constexpr ( std::is_same_v< T, guard::negation > )
            {
                out.what = cg::kind::negation;
                out.children.push_back( compile_node( sys, n.child ) );
            }
            else
            {
                out.what = n.conjunction ? cg::kind::conjunction : cg::kind::disjunction;
                for ( const auto& c : n.children )
                    out.children.push_back( compile_node( sys, c ) );
            }
        },
        g.get() );
    return out;
}

bool eval_node( const cg& g, const explicit_state& s )
{
    switch ( g.what )
    {
    case cg::kind::constant: return g.value;
    case cg::kind::var_atom: return compare( s.values[ g.index ], g.op, g.constant );
    case cg::kind::loc_atom: return s.locations[ g.index ] == g.location;
    case cg::kind::negation: return !eval_node( g.children.front(), s );
    case cg::kind::conjunction:
        for ( const auto& c : g.children )
            if ( !eval_node( c, s ) )
                return false;
        return true;
    case cg::kind::disjunction:
        for ( const auto& c : g.children )
            if ( eval_node( c, s ) )
                return true;
        return false;
    }
    return false;
}

} // namespace

std::size_t semantics::compile( const guard& g )
{
    _guards.push_back( std::make_shared< compiled_guard >( compile_node( *_sys, g ) ) );
    return _guards.size() - 1;
}

semantics::semantics( const system& sys ) : _sys{ &sys }
{
    const auto n_events = sys.events.size();
    _participants.resize( n_events );
    _by_event.resize( sys.automata.size(), std::vector< std::vector< std::size_t > >( n_events ) );
    _transitions.resize( sys.automata.size() );
    for ( std::size_t ai = 0; ai < sys.automata.size(); ++ai )
    {
        const auto& a = sys.automata[ ai ];
        for ( const auto& t : a.transitions )
        {
            const auto ei = sys.event_index( t.event );
            const auto from = a.location_index( t.from );
            const auto to = a.location_index( t.to );
            if ( !ei || !from || !to )
                throw model_error( "transition of '" + a.name + "' references undeclared names" );
            compiled_transition ct{ static_cast< int >( *from ), static_cast< int >( *to ), compile( t.condition ), {} };
            for ( const auto& u : t.updates )
            {
                const auto vi = sys.variable_index( u.var );
                if ( !vi )
                    throw model_error( "update of unknown variable '" + u.var + "'" );
                ct.updates.push_back( { *vi, u.how, u.value } );
            }
            _by_event[ ai ][ *ei ].push_back( _transitions[ ai ].size() );
            _transitions[ ai ].push_back( std::move( ct ) );
        }
        for ( std::size_t e = 0; e < n_events; ++e )
            if ( !_by_event[ ai ][ e ].empty() )
                _participants[ e ].push_back( ai );
    }
    if ( sys.forbidden )
        _forbidden_guard = compile( *sys.forbidden );
}

bool semantics::eval( std::size_t guard_id, const explicit_state& s ) const
{
    return eval_node( *_guards[ guard_id ], s );
}

bool semantics::holds( const guard& g, const explicit_state& s ) const
{
    return eval_node( compile_node( *_sys, g ), s );
}

std::optional< std::vector< semantics::firing > > semantics::firings( const explicit_state& s, std::size_t event ) const
{
    const auto& parts = _participants.at( event );
    if ( parts.empty() )
        return std::nullopt;
    std::vector< firing > out;
    for ( const auto ai : parts )
    {
        bool found = false;
        for ( const auto ti : _by_event[ ai ][ event ] )
        {
            const auto& t = _transitions[ ai ][ ti ];
            if ( t.from != s.locations[ ai ] || !eval( t.guard, s ) )
                continue;
            bool in_range = true;
            for ( const auto& u : t.updates )
            {
                const auto& decl = _sys->variables[ u.var ];
                long next = s.values[ u.var ];
                if ( u.how == update::kind::assign )
                    next = u.value;
                else if ( u.how == update::kind::offset )
                    next += u.value;
                if ( next < decl.min || next > decl.max )
                {
                    in_range = false;
                    break;
                }
            }
            if ( !in_range )
                continue;
            out.push_back( { ai, ti } );
            found = true;
            break;
        }
        if ( !found )
            return std::nullopt;
    }
    return out;
}

std::optional< explicit_state > semantics::enabled( const explicit_state& s, std::size_t event ) const
{
    const auto fire = firings( s, event );
    if ( !fire )
        return std::nullopt;
    explicit_state next = s;
    for ( const auto& f : *fire )
    {
        const auto& t = _transitions[ f.automaton ][ f.transition ];
        next.locations[ f.automaton ] = t.to;
        for ( const auto& u : t.updates )
        {
            if ( u.how == update::kind::assign )
                next.values[ u.var ] = u.value;
            else if ( u.how == update::kind::offset )
                next.values[ u.var ] = s.values[ u.var ] + u.value;
        }
    }
    return next;
}

bool semantics::forbidden( const explicit_state& s ) const
{
    for ( std::size_t ai = 0; ai < _sys->automata.size(); ++ai )
    {
        const auto& a = _sys->automata[ ai ];
        const auto& here = a.locations[ static_cast< std::size_t >( s.locations[ ai ] ) ];
        if ( std::find( a.forbidden.begin(), a.forbidden.end(), here ) != a.forbidden.end() )
            return true;
    }
    return _forbidden_guard && eval( *_forbidden_guard, s );
}

bool semantics::in_domain( const explicit_state& s ) const
{
    if ( s.locations.size() != _sys->automata.size() || s.values.size() != _sys->variables.size() )
        return false;
    for ( std::size_t a = 0; a < s.locations.size(); ++a )
        if ( s.locations[ a ] < 0 || s.locations[ a ] >= static_cast< int >( _sys->automata[ a ].locations.size() ) )
            return false;
    for ( std::size_t v = 0; v < s.values.size(); ++v )
        if ( s.values[ v ] < _sys->variables[ v ].min || s.values[ v ] > _sys->variables[ v ].max )
            return false;
    return true;
}

double semantics::state_count() const
{
    double n = 1;
    for ( const auto& a : _sys->automata )
        n = std::min( 1e18, n * static_cast< double >( a.locations.size() ) );
    for ( const auto& v : _sys->variables )
        n = std::min( 1e18, n * static_cast< double >( v.max - v.min + 1 ) );
    return n;
}

void semantics::for_each_state( const std::function< void( const explicit_state& ) >& visit ) const
{
    explicit_state s;
    s.locations.assign( _sys->automata.size(), 0 );
    for ( const auto& v : _sys->variables )
        s.values.push_back( v.min );
    for ( ;; )
    {
        visit( s );
        std::size_t k = _sys->variables.size();
        while ( k-- > 0 )
        {
            if ( s.values[ k ] < _sys->variables[ k ].max )
            {
                ++s.values[ k ];
                break;
            }
            s.values[ k ] = _sys->variables[ k ].min;
        }
        if ( k != static_cast< std::size_t >( -1 ) )
            continue;
        std::size_t a = _sys->automata.size();
        while ( a-- > 0 )
        {
            if ( s.locations[ a ] + 1 < static_cast< int >( _sys->automata[ a ].locations.size() ) )
            {
                ++s.locations[ a ];
                break;
            }
            s.locations[ a ] = 0;
        }
        if ( a == static_cast< std::size_t >( -1 ) )
            return;
    }
}

std::optional< explicit_state > enabled( const system& sys, const explicit_state& s, std::string_view event )
{
    const auto ei = sys.event_index( event );
    if ( !ei )
        throw model_error( "unknown event '" + std::string{ event } + "'" );
    return semantics{ sys }.enabled( s, *ei );
}

} // namespace pdrc::model
