#pragma once

#include "pdrc/encoding.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace pdrc
{

using sat::clause;
using sat::cube;
using sat::lit;

struct options
{
    // Drop literals of each blocked cube while it stays relatively inductive.
    bool inductive_generalization = true;
    // Audit the trace invariants after every blocking phase and propagation.
    bool debug_invariants = false;
    std::optional< std::size_t > max_frames;
    std::int64_t max_conflicts = -1;
    std::optional< double > max_seconds;
    // NDJSON, one record per solver query.
    std::ostream* run_log = nullptr;
    // Largest (state, event) count for which the explicit image check runs.
    double explicit_check_limit = 1000;
};

// T_c is strengthened with (not ind_c or not t) for every cube t.
struct forbidden_cube
{
    cube t;
    std::size_t frame;   // k of the block call that found it
    cube blocked;        // the target cube s
    encoding::predicate selector;
};

struct supervisor
{
    std::vector< forbidden_cube > cubes;
};

// Cubes t_0..t_j from an initial cube to a bad one, each step an
// uncontrollable transition between the concrete witnesses.
struct counterexample
{
    std::vector< cube > cubes;
    std::vector< model::explicit_state > states;
    std::vector< std::size_t > events;   // events[i] leads from states[i] to states[i + 1]
};

struct run_stats
{
    std::size_t frames = 0;            // N when the run stopped
    std::size_t iterations = 0;        // main-loop iterations started
    std::size_t clauses_learned = 0;   // blocked cubes (each added to frames 1..k)
    std::size_t supervisor_cubes = 0;
    std::size_t propagated = 0;
    std::uint64_t solver_calls = 0;
    std::uint64_t conflicts = 0;
};

struct controlled
{
    supervisor sup;
    std::vector< clause > invariant;   // F_i at the fixpoint, canonical order
    std::size_t fixpoint_frame = 0;
    run_stats stats;
};

struct uncontrollable
{
    counterexample path;
    supervisor sup;   // whatever had been learned; not a valid controller
    run_stats stats;
};

struct inconclusive
{
    std::string reason;
    supervisor sup;   // partial and uncertified
    run_stats stats;
};

using synthesis_result = std::variant< controlled, uncontrollable, inconclusive >;

// A debug audit or a hard bound failed. Always a bug in the engine.
class invariant_violation : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

synthesis_result synthesize( const encoding::symbolic_system& sym, const options& opts = {} );

class engine_impl;

// Step-wise access to the algorithm for tests. `synthesize` drives it to
// completion.
class engine
{
public:
    engine( const encoding::symbolic_system& sym, const options& opts = {} );
    ~engine();
    engine( const engine& ) = delete;
    engine& operator=( const engine& ) = delete;

    // SAT[I and not P]; on true the run is uncontrollable with a length-0 path.
    std::optional< counterexample > initial_violation();

    // Blocks every bad state of R_N. Throws found_uncontrollable.
    void blocking_phase();
    void block( const cube& s, std::size_t k );
    // Appends F_{N+1} and pushes clauses forward.
    void propagate();
    // Index i with F_i == F_{i+1}, if any.
    [[nodiscard]] std::optional< std::size_t > check_fixpoint() const;
    // N := N + 1 (after a failed fixpoint check).
    void advance();

    // Generalisations. `minterm` is the current-state projection of a model.
    cube generalize_bad_state( const cube& minterm );
    cube generalize_preimage_c( const cube& minterm, const cube& s );
    cube generalize_preimage_u( const cube& minterm, const cube& s );

    // Runs the audits regardless of options.debug_invariants. Throws
    // invariant_violation.
    void audit();

    [[nodiscard]] std::size_t depth() const;   // N
    [[nodiscard]] const std::vector< std::set< clause > >& frames() const;   // F_0 (empty) .. F_{N(+1)}
    [[nodiscard]] const supervisor& current_supervisor() const;
    [[nodiscard]] run_stats stats() const;

    struct found_uncontrollable
    {
        counterexample path;
    };
    struct out_of_budget
    {
        std::string reason;
    };

private:
    std::unique_ptr< engine_impl > _impl;
};

// Whether controllable (state, event) is disabled by the supervisor.
bool disabled_by( const supervisor& sup, const std::vector< bool >& bits );

} // namespace pdrc
