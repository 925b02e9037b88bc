package corpus;

public class Nesting {

    int deep(int[][] grid) {
        int sum = 0;
        for (int i = 0; i < grid.length; i++) {
            for (int j = 0; j < grid[i].length; j++) {
                if (grid[i][j] > 0) {
                    if (j % 2 == 0) {
                        sum += grid[i][j];
                    } else {
                        sum -= grid[i][j];
                    }
                }
            }
        }
        return sum;
    }

    int collapse(int n) {
        while (n > 1) {
            if (n % 2 == 0) { n /= 2; } else { n = 3 * n + 1; }
        }
        return n;
    }
}
