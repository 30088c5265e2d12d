use crate::ast::Answer;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("no yes/no answer found in the response")]
pub struct ExtractionFailure;

fn is_word_char(c: Option<char>) -> bool {
    c.is_some_and(|c| c.is_alphanumeric() || c == '_')
}

/// `yes` or `no` at byte `i` of `lower`, case already folded.
fn answer_at(lower: &str, i: usize, bounded: bool) -> Option<Answer> {
    let rest = &lower[i..];
    let (answer, len) = if rest.starts_with("yes") {
        (Answer::Yes, 3)
    } else if rest.starts_with("no") {
        (Answer::No, 2)
    } else {
        return None;
    };
    if bounded && (is_word_char(lower[..i].chars().next_back()) || is_word_char(rest[len..].chars().next())) {
        return None;
    }
    Some(answer)
}

/// The first standalone `yes` or `no`, case-insensitively.
pub fn extract_direct(response: &str) -> Result<Answer, ExtractionFailure> {
    let lower = response.to_lowercase();
    lower.char_indices().find_map(|(i, _)| answer_at(&lower, i, true)).ok_or(ExtractionFailure)
}

/// The `yes` or `no` after the last `answer:` marker that is followed by one.
pub fn extract_cot(response: &str) -> Result<Answer, ExtractionFailure> {
    let lower = response.to_lowercase();
    lower
        .match_indices("answer:")
        .filter_map(|(i, m)| {
            let after = &lower[i + m.len()..];
            let skipped = after.len() - after.trim_start().len();
            answer_at(&lower, i + m.len() + skipped, false)
        })
        .last()
        .ok_or(ExtractionFailure)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct() {
        assert_eq!(extract_direct("no"), Ok(Answer::No));
        assert_eq!(extract_direct("Answer: Yes"), Ok(Answer::Yes));
        assert_eq!(extract_direct("I don't know. Nobody does. No."), Ok(Answer::No));
        assert_eq!(extract_direct("YES, and no"), Ok(Answer::Yes));
        assert_eq!(extract_direct("maybe"), Err(ExtractionFailure));
        assert_eq!(extract_direct("eyes nose"), Err(ExtractionFailure));
    }

    #[test]
    fn cot() {
        assert_eq!(extract_cot("Reasoning steps: 1. x\nAnswer: Yes"), Ok(Answer::Yes));
        assert_eq!(extract_cot("answer:no"), Ok(Answer::No));
        assert_eq!(extract_cot("The answer is unclear."), Err(ExtractionFailure));
        assert_eq!(extract_cot("Answer: Yes\nWait. Answer: No"), Ok(Answer::No));
        assert_eq!(extract_cot("Answer: No\nAnswer: unclear"), Ok(Answer::No));
        assert_eq!(extract_cot("yes"), Err(ExtractionFailure));
        // lowercase folding may change byte lengths
        assert_eq!(extract_cot("İİ Answer: yes"), Ok(Answer::Yes));
    }
}
