#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// The user-facing modelling layer: a network of extended finite state
// machines over bounded integer variables, synchronised on shared events.

namespace pdrc::model
{

class model_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class cmp_op
{
    eq,
    ne,
    lt,
    le,
    gt,
    ge,
};

std::string_view to_string( cmp_op op );
cmp_op negate( cmp_op op );
bool compare( long lhs, cmp_op op, long rhs );

// Boolean guard over `var op constant` atoms and `automaton@location` atoms.
// Location atoms are only meaningful in the global forbidden predicate and in
// guards added by supervisor extraction.
class guard
{
public:
    struct constant
    {
        bool value;
    };
    struct var_atom
    {
        std::string var;
        cmp_op op;
        long value;
    };
    struct loc_atom
    {
        std::string automaton;
        std::string location;
    };
    struct negation;
    struct junction;
    using node = std::variant< constant, var_atom, loc_atom, negation, junction >;

    guard();

    static guard truth();
    static guard falsity();
    static guard compare( std::string var, cmp_op op, long value );
    static guard at( std::string automaton, std::string location );
    static guard all_of( std::vector< guard > children );
    static guard any_of( std::vector< guard > children );

    [[nodiscard]] const node& get() const;
    [[nodiscard]] bool is_true() const;
    [[nodiscard]] bool is_false() const;

    friend guard operator&&( const guard& a, const guard& b );
    friend guard operator||( const guard& a, const guard& b );
    friend guard operator!( const guard& a );

private:
    explicit guard( node n );
    std::shared_ptr< const node > _node;
};

struct guard::negation
{
    guard child;
};

struct guard::junction
{
    bool conjunction;
    std::vector< guard > children;
};

inline const guard::node& guard::get() const { return *_node; }

// Textual form used by the model file: `x >= 2 && (y != 1 || !A@l3)`.
std::string to_string( const guard& g );
guard parse_guard( std::string_view text );

struct update
{
    enum class kind
    {
        assign,   // x' := value
        keep,     // x' := x
        offset,   // x' := x + value (value may be negative)
    };
    std::string var;
    kind how = kind::keep;
    long value = 0;

    static update assign( std::string var, long value ) { return { std::move( var ), kind::assign, value }; }
    static update add( std::string var, long delta ) { return { std::move( var ), kind::offset, delta }; }

    auto operator<=>( const update& ) const = default;
};

// `3`, `x`, `x+2`, `x-1` relative to the assigned variable.
std::string update_rhs( const update& u );
update parse_update( std::string var, std::string_view rhs );

struct var_decl
{
    std::string name;
    long min = 0;
    long max = 0;
    long init = 0;
};

struct event_decl
{
    std::string name;
    bool controllable = true;
};

struct transition
{
    std::string from;
    std::string event;
    std::string to;
    guard condition = guard::truth();
    std::vector< update > updates;
};

struct automaton
{
    std::string name;
    std::vector< std::string > locations;
    std::string initial;
    std::vector< std::string > forbidden;
    std::vector< transition > transitions;

    [[nodiscard]] std::optional< std::size_t > location_index( std::string_view loc ) const;
    [[nodiscard]] bool declares( std::string_view event ) const;
};

struct system
{
    std::vector< var_decl > variables;
    std::vector< event_decl > events;
    std::vector< automaton > automata;
    // States satisfying this predicate are forbidden, in addition to the
    // automata's forbidden locations.
    std::optional< guard > forbidden;

    [[nodiscard]] std::optional< std::size_t > variable_index( std::string_view name ) const;
    [[nodiscard]] std::optional< std::size_t > event_index( std::string_view name ) const;
    [[nodiscard]] std::optional< std::size_t > automaton_index( std::string_view name ) const;
};

struct diagnostic
{
    enum class kind
    {
        declaration,       // malformed or duplicate declaration
        reference,         // unknown variable / event / location
        domain,            // min > max, init outside domain
        update,            // variable assigned twice or by two synchronised automata
        nondeterminism,    // overlapping same-source same-event transitions
    };
    kind what;
    std::string automaton;
    std::optional< std::size_t > transition;
    std::string message;
};

std::string to_string( const diagnostic& d );

std::vector< diagnostic > validate( const system& sys );

struct explicit_state
{
    std::vector< int > locations;
    std::vector< long > values;

    auto operator<=>( const explicit_state& ) const = default;
};

struct explicit_state_hash
{
    std::size_t operator()( const explicit_state& s ) const noexcept;
};

std::string to_string( const system& sys, const explicit_state& s );

explicit_state initial_state( const system& sys );

// Index-resolved view of a validated system for fast stepping and predicate
// evaluation. Holds a reference; the system must outlive it.
class semantics
{
public:
    explicit semantics( const system& sys );

    [[nodiscard]] const system& source() const { return *_sys; }

    // The unique successor under `event`, or nothing when some automaton in
    // the event's alphabet has no enabled transition.
    [[nodiscard]] std::optional< explicit_state > enabled( const explicit_state& s, std::size_t event ) const;

    // Indices of the transitions (one per participating automaton) that fire.
    struct firing
    {
        std::size_t automaton;
        std::size_t transition;
    };
    [[nodiscard]] std::optional< std::vector< firing > > firings( const explicit_state& s, std::size_t event ) const;

    [[nodiscard]] bool holds( const guard& g, const explicit_state& s ) const;
    [[nodiscard]] bool forbidden( const explicit_state& s ) const;
    [[nodiscard]] bool in_domain( const explicit_state& s ) const;

    // Calls `visit` on every in-domain state (product of locations and
    // variable domains) in lexicographic order.
    void for_each_state( const std::function< void( const explicit_state& ) >& visit ) const;
    // Product of location counts and domain sizes, saturating at ~1e18.
    [[nodiscard]] double state_count() const;

    struct compiled_guard;

private:
    struct compiled_transition
    {
        int from;
        int to;
        std::size_t guard;
        struct assignment
        {
            std::size_t var;
            update::kind how;
            long value;
        };
        std::vector< assignment > updates;
    };

    bool eval( std::size_t guard_id, const explicit_state& s ) const;
    std::size_t compile( const guard& g );

    const system* _sys;
    std::vector< std::shared_ptr< compiled_guard > > _guards;
    // [automaton][event] -> transitions of that automaton with that event.
    std::vector< std::vector< std::vector< std::size_t > > > _by_event;
    std::vector< std::vector< compiled_transition > > _transitions;
    std::vector< std::vector< std::size_t > > _participants;  // [event] -> automata
    std::optional< std::size_t > _forbidden_guard;
};

// Convenience wrapper for one-off queries; throws model_error on an unknown
// event name.
std::optional< explicit_state > enabled( const system& sys, const explicit_state& s, std::string_view event );

} // namespace pdrc::model
