//! `<result>` block extraction.

const OPEN: &str = "<result>";
const CLOSE: &str = "</result>";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("no <result> block in completion")]
    NoResultBlock,
    #[error("<result> block is not terminated")]
    UnterminatedResultBlock,
}

/// Content of the last complete `<result>...</result>` pair, trimmed.
pub fn extract_result(completion: &str) -> Result<&str, ExtractError> {
    let last_open = completion.rfind(OPEN);
    match completion.rfind(CLOSE) {
        Some(close) => {
            if matches!(last_open, Some(o) if o > close) {
                return Err(ExtractError::UnterminatedResultBlock);
            }
            let open = completion[..close]
                .rfind(OPEN)
                .ok_or(ExtractError::NoResultBlock)?;
            Ok(completion[open + OPEN.len()..close].trim())
        }
        None if last_open.is_some() => Err(ExtractError::UnterminatedResultBlock),
        None => Err(ExtractError::NoResultBlock),
    }
}
