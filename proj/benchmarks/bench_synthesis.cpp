#include "pdrc/explicit.hpp"
#include "pdrc/generators.hpp"
#include "pdrc/pdrc.hpp"

#include <benchmark/benchmark.h>

namespace
{

using namespace pdrc;

void run( benchmark::State& state, const model::system& sys, bool ind_gen )
{
    const auto sym = encoding::encode( sys );
    options o;
    o.inductive_generalization = ind_gen;
    run_stats last;
    for ( auto _ : state )
    {
        auto r = synthesize( sym, o );
        benchmark::DoNotOptimize( r );
        if ( !std::holds_alternative< controlled >( r ) )
            state.SkipWithError( "not controlled" );
        else
            last = std::get< controlled >( r ).stats;
    }
    state.counters[ "frames" ] = static_cast< double >( last.frames );
    state.counters[ "clauses" ] = static_cast< double >( last.clauses_learned );
    state.counters[ "solver_calls" ] = static_cast< double >( last.solver_calls );
}

void fig1( benchmark::State& state ) { run( state, generators::fig1(), state.range( 0 ) != 0 ); }

void edp( benchmark::State& state )
{
    run( state, generators::edp( static_cast< int >( state.range( 0 ) ), static_cast< int >( state.range( 1 ) ) ), true );
}

void cmt( benchmark::State& state )
{
    run( state, generators::cmt( static_cast< int >( state.range( 0 ) ), static_cast< int >( state.range( 1 ) ) ), true );
}

// Explicit synthesis on the same instances, for comparison at small sizes.
void edp_explicit( benchmark::State& state )
{
    const auto sys = generators::edp( static_cast< int >( state.range( 0 ) ), static_cast< int >( state.range( 1 ) ) );
    for ( auto _ : state )
        benchmark::DoNotOptimize( oracle::rw_synthesize( sys ) );
}

} // namespace

BENCHMARK( fig1 )->Arg( 0 )->Arg( 1 )->Unit( benchmark::kMicrosecond );
BENCHMARK( edp )->Args( { 2, 1 } )->Args( { 5, 5 } )->Args( { 5, 10 } )->Args( { 10, 10 } )->Unit( benchmark::kMillisecond );
BENCHMARK( cmt )->Args( { 1, 1 } )->Args( { 1, 5 } )->Args( { 2, 3 } )->Args( { 3, 3 } )->Unit( benchmark::kMillisecond );
BENCHMARK( edp_explicit )->Args( { 2, 1 } )->Args( { 3, 2 } )->Args( { 4, 2 } )->Unit( benchmark::kMillisecond );

BENCHMARK_MAIN();
