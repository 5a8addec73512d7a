use hardwall::{selftest, SelfTestLevel};
fn main() {
    let report = selftest(SelfTestLevel::Full);
    print!("{report}");
    std::process::exit(if report.passed() { 0 } else { 1 });
}
