#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdrc::sat
{

using var = std::uint32_t;

// A literal packs the variable index and the sign into one word: 2*v for the
// positive literal, 2*v+1 for the negative one.
class lit
{
    std::uint32_t _code = 0;

    constexpr explicit lit( std::uint32_t code ) : _code{ code } {}

public:
    constexpr lit() = default;
    constexpr lit( var v, bool negative ) : _code{ 2 * v + ( negative ? 1u : 0u ) } {}

    static constexpr lit positive( var v ) { return lit{ v, false }; }
    static constexpr lit negative( var v ) { return lit{ v, true }; }
    static constexpr lit from_code( std::uint32_t code ) { return lit{ code }; }

    [[nodiscard]] constexpr var variable() const { return _code >> 1; }
    [[nodiscard]] constexpr bool is_negative() const { return ( _code & 1u ) != 0; }
    [[nodiscard]] constexpr std::uint32_t code() const { return _code; }

    constexpr lit operator~() const { return lit{ _code ^ 1u }; }
    constexpr auto operator<=>( const lit& ) const = default;

    // DIMACS form: 1-based, negative for negated literals.
    [[nodiscard]] long dimacs() const
    {
        const auto v = static_cast< long >( variable() ) + 1;
        return is_negative() ? -v : v;
    }
};

// Sorted by variable index, duplicate-free. Both forms share the
// representation; the wrapper type says how the list is read.
struct clause
{
    std::vector< lit > lits;

    clause() = default;
    explicit clause( std::vector< lit > ls );

    [[nodiscard]] bool empty() const { return lits.empty(); }
    [[nodiscard]] std::size_t size() const { return lits.size(); }
    auto operator<=>( const clause& ) const = default;
};

struct cube
{
    std::vector< lit > lits;

    cube() = default;
    explicit cube( std::vector< lit > ls );

    [[nodiscard]] bool empty() const { return lits.empty(); }
    [[nodiscard]] std::size_t size() const { return lits.size(); }
    [[nodiscard]] bool contains( lit l ) const;
    auto operator<=>( const cube& ) const = default;
};

// Sort by variable and drop duplicates. Throws std::invalid_argument when a
// complementary pair is present.
std::vector< lit > canonical_literals( std::vector< lit > lits );

clause negate( const cube& c );
cube negate( const clause& c );

class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class status
{
    satisfiable,
    unsatisfiable,
    budget_exhausted,
};

struct statistics
{
    std::uint64_t solves = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts = 0;
};

struct budget
{
    // Negative means unlimited. Conflicts are counted over the lifetime of the
    // solver, not per call.
    std::int64_t max_conflicts = -1;
    std::optional< std::chrono::steady_clock::time_point > deadline;
};

class solver_impl;

// Incremental CDCL solver with solving under assumptions and final-conflict
// cores. Clauses are permanent; retractable constraints are expressed through
// activation literals passed as assumptions.
class solver
{
    std::unique_ptr< solver_impl > _impl;

public:
    solver();
    ~solver();
    solver( solver&& ) noexcept;
    solver& operator=( solver&& ) noexcept;
    solver( const solver& ) = delete;
    solver& operator=( const solver& ) = delete;

    var new_var();
    // Makes sure variables [0, count) exist.
    void reserve_vars( std::uint32_t count );
    [[nodiscard]] std::uint32_t num_vars() const;

    // Throws sat::error on a literal over an unallocated variable.
    void add_clause( std::span< const lit > lits );
    void add_clause( std::initializer_list< lit > lits );
    void add_clause( const clause& c ) { add_clause( std::span< const lit >{ c.lits } ); }

    status solve( std::span< const lit > assumptions = {} );
    status solve( std::initializer_list< lit > assumptions );

    // Valid after a satisfiable answer.
    [[nodiscard]] bool model_value( lit l ) const;
    [[nodiscard]] bool model_value( var v ) const { return model_value( lit::positive( v ) ); }
    // Valid after an unsatisfiable answer: a subset of the assumptions whose
    // conjunction with the database is unsatisfiable.
    [[nodiscard]] const std::vector< lit >& core() const;

    void set_budget( const budget& b );
    [[nodiscard]] const statistics& stats() const;

    // Writes the permanent (non-learnt) clauses plus root-level units.
    void write_dimacs( std::ostream& out ) const;
};

} // namespace pdrc::sat
